#!/usr/bin/env python3
"""
Omega Ideals Test Launcher

This script provides a simple way to run the test modules of the
omega_ideals package. It can run all tests or specific groups.
"""

import sys
import argparse
import subprocess
from pathlib import Path

# Define test modules
TEST_MODULES = {
    "sets": "omega_ideals/tests/test_setexpr.py",
    "ideals": "omega_ideals/tests/test_ideals.py",
    "tallness": "omega_ideals/tests/test_tallness.py",
    "sequences": "omega_ideals/tests/test_sequences.py",
    "summability": "omega_ideals/tests/test_summability.py",
    "duality": "omega_ideals/tests/test_duality.py",
    "cli": "omega_ideals/tests/test_cli.py",
}


def run_test(test_name, extra_args=None):
    """
    Run a specific test module with pytest.

    Args:
        test_name (str): Name of the test group to run
        extra_args (list, optional): Extra arguments to pass to pytest

    Returns:
        int: Exit code from pytest
    """
    if test_name not in TEST_MODULES:
        print(f"❌ Unknown test: {test_name}")
        return 1

    command = [sys.executable, "-m", "pytest", TEST_MODULES[test_name]]
    if extra_args:
        command.extend(extra_args)

    print(f"\n==== Running {test_name} tests ====")
    print(f"Command: {' '.join(command)}\n")

    result = subprocess.run(command)
    return result.returncode


def main():
    """Main function to parse arguments and run tests."""
    parser = argparse.ArgumentParser(description='Run omega_ideals tests.')
    parser.add_argument('tests', nargs='*', choices=['all'] + list(TEST_MODULES.keys()),
                        default=['all'], help='Test groups to run')
    parser.add_argument('--args', nargs=argparse.REMAINDER,
                        help='Additional arguments to pass to pytest')

    args = parser.parse_args()

    # Create debug directory if it doesn't exist
    Path("debug").mkdir(exist_ok=True)

    selected = list(TEST_MODULES) if 'all' in args.tests else args.tests
    if 'all' in args.tests:
        print("==== Running all tests ====")

    exit_code = 0
    for test_name in selected:
        result = run_test(test_name, args.args)
        if result != 0:
            exit_code = result

    print("\n==== Test Summary ====")
    if exit_code == 0:
        print("✅ All tests completed successfully!")
    else:
        print(f"❌ Some tests failed with exit code {exit_code}")

    return exit_code


if __name__ == "__main__":
    sys.exit(main())
