"""Rewrite tests/golden/*.out from the current CLI.

Only run this after checking the new outputs against the oracle tests;
the golden files are meant to stay frozen.
"""

import io
import os
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from golden_cases import CASES  # noqa: E402

from polygrowth.cli import run  # noqa: E402


def main() -> None:
    os.chdir(ROOT)
    out_dir = ROOT / "tests" / "golden"
    out_dir.mkdir(exist_ok=True)
    for name, argv, code in CASES:
        buf, err = io.StringIO(), io.StringIO()
        got = run(argv, buf, err)
        if got != code:
            raise SystemExit(f"{name}: exit {got}, expected {code}: {err.getvalue()}")
        (out_dir / f"{name}.out").write_text(buf.getvalue(), encoding="utf-8")
        print(f"wrote {name}.out")


if __name__ == "__main__":
    main()
