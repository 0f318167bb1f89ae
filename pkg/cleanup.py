#!/usr/bin/env python3
"""
Cleanup Script

Removes what omega-ideals leaves behind: the log file named by
OMEGA_IDEALS_LOG_FILE (plus rotated copies next to it) and CSV traces
written with --out.
"""

import os
import glob
import argparse
from pathlib import Path

from dotenv import load_dotenv

DEFAULT_LOG_FILE = "debug/omega_ideals.log"

# Never deleted, whatever the patterns match
PROTECTED_FILES = {"README.md", "DESIGN.md", ".env", ".env.example", "requirements.txt"}


def log_patterns(log_file=None):
    """
    Glob patterns of the log files for the configured log location.

    Args:
        log_file (str, optional): Log path. If None, OMEGA_IDEALS_LOG_FILE is used.

    Returns:
        list: Patterns (empty when file logging is disabled)
    """
    if log_file is None:
        log_file = os.getenv("OMEGA_IDEALS_LOG_FILE", DEFAULT_LOG_FILE)
    if not log_file:
        return []
    path = Path(log_file)
    return [str(path), str(path.parent / f"{path.name}.*")]


def list_files_to_clean(log_file=None, logs=True, traces=True, root="."):
    """
    List the generated files that can be safely deleted.

    Args:
        log_file (str, optional): Log path, as for log_patterns
        logs (bool): Include log files
        traces (bool): Include CSV traces in ``root``
        root (str): Directory searched for traces

    Returns:
        list: Sorted paths
    """
    patterns = []
    if logs:
        patterns.extend(log_patterns(log_file))
    if traces:
        patterns.append(str(Path(root) / "*.csv"))

    found = set()
    for pattern in patterns:
        found.update(p for p in glob.glob(pattern) if os.path.isfile(p))
    return sorted(f for f in found if os.path.basename(f) not in PROTECTED_FILES)


def main():
    """List the generated files and delete them after confirmation."""
    load_dotenv()
    parser = argparse.ArgumentParser(description='Clean up omega-ideals logs and CSV traces.')
    parser.add_argument('--delete', action='store_true', help='Delete files without confirmation prompt')
    group = parser.add_mutually_exclusive_group()
    group.add_argument('--logs-only', action='store_true', help='Leave CSV traces in place')
    group.add_argument('--traces-only', action='store_true', help='Leave log files in place')
    args = parser.parse_args()

    files_to_clean = list_files_to_clean(logs=not args.traces_only, traces=not args.logs_only)

    if not files_to_clean:
        print("No generated files found to clean up.")
        return

    print("The following files will be deleted:")
    for file in files_to_clean:
        print(f"  - {file}")

    if args.delete or input("\nDelete these files? (y/n): ").lower() == 'y':
        for file in files_to_clean:
            try:
                os.remove(file)
                print(f"Deleted: {file}")
            except OSError as e:
                print(f"Error deleting {file}: {e}")

        print("\nCleanup completed.")
    else:
        print("Cleanup cancelled.")


if __name__ == "__main__":
    main()
