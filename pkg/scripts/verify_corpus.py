#!/usr/bin/env python3
"""Verify every scene file in a directory and report per-file verdicts.

By default this runs over the anchor corpus in docs/.  With --machine the
TSV reports are concatenated to stdout (byte-identical across runs), which
is handy for committing golden outputs or diffing two checkouts.

Examples:
    python3 scripts/verify_corpus.py
    python3 scripts/verify_corpus.py --dir docs --machine > corpus.tsv
"""

import argparse
import contextlib
import io
import sys
from pathlib import Path

from multipoint.cli import main as cli_main


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--dir",
        default=str(Path(__file__).resolve().parent.parent / "docs"),
        help="directory holding .scene files",
    )
    parser.add_argument("--machine", action="store_true")
    args = parser.parse_args(argv)

    files = sorted(Path(args.dir).glob("*.scene"))
    if not files:
        print(f"no .scene files under {args.dir}", file=sys.stderr)
        return 2
    worst = 0
    for path in files:
        if args.machine:
            code = cli_main(["verify", str(path), "--machine"])
        else:
            with contextlib.redirect_stdout(io.StringIO()) as buf:
                code = cli_main(["verify", str(path)])
            tail = buf.getvalue().strip().splitlines()[-1] if buf.getvalue() else ""
            print(f"{path.name}: {'ok' if code == 0 else f'exit {code}'} ({tail})")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
