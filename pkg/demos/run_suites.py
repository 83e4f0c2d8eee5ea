"""Run every property suite at its default size and print one line each."""
import sys

from lamkit import run_suite, suite_names

failed = 0
for name in suite_names():
    rep = run_suite(name)
    print(rep.summary())
    failed += not rep.passed
sys.exit(1 if failed else 0)
