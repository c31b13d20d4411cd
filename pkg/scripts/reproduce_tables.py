#!/usr/bin/env python3
"""Print the two accommodation tables and check them against frozen values."""

import sys

from regionvote.bounds import table_shifting_gain, table_stability_margins

EXPECTED_ACCOMMODATION = (
    (656, 1167, 250),
    (688, 1222, 500),
    (750, 1333, 1000),
)
EXPECTED_SHIFT_GAIN = (
    (656, 945, 1167, 1680),
    (688, 990, 1222, 1760),
    (719, 1035, 1278, 1840),
    (750, 1080, 1333, 1920),
)


def main() -> int:
    failures = 0
    for table, expected in (
        (table_stability_margins(), EXPECTED_ACCOMMODATION),
        (table_shifting_gain(), EXPECTED_SHIFT_GAIN),
    ):
        print(table.to_text())
        ok = table.cells == expected
        print(f"{'PASS' if ok else 'FAIL'}: {table.title}")
        print()
        if not ok:
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
