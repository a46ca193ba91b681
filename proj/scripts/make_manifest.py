#!/usr/bin/env python3
"""Build a srif manifest from a dataset's published score file.

The score file is any delimited table with one row per test image. Columns
are picked by name (header row) or zero-based index. The reference path,
algorithm label, and scale are derived from the test path with regex rules,
so one invocation adapts to each dataset's naming convention:

  --ref-rule  'pattern=>replacement'   re.sub applied to the test path
  --algorithm-rule 'pattern'           first capture group, searched
  --scale-rule 'pattern'               first capture group, searched

Paths in the output are kept relative to --root, which is also where
--check looks for the files.
"""

import argparse
import csv
import re
import sys
from pathlib import Path


def sniff_rows(path):
    text = Path(path).read_text(encoding="utf-8-sig")
    sample = text[:4096]
    try:
        dialect = csv.Sniffer().sniff(sample, delimiters=",;\t ")
    except csv.Error:
        return [line.split() for line in text.splitlines() if line.strip()]
    rows = list(csv.reader(text.splitlines(), dialect))
    return [r for r in rows if any(cell.strip() for cell in r)]


def column_picker(spec, header):
    if spec.isdigit():
        idx = int(spec)
        return lambda row: row[idx]
    if header is None or spec not in header:
        sys.exit(f"error: column '{spec}' not found; header = {header}")
    idx = header.index(spec)
    return lambda row: row[idx]


def main():
    ap = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    ap.add_argument("--scores", required=True, help="published score table")
    ap.add_argument("--test-col", default="0", help="test image column (name or index)")
    ap.add_argument("--mos-col", default="1", help="opinion score column (name or index)")
    ap.add_argument("--ref-rule", required=True, help="'pattern=>replacement' for ref_path")
    ap.add_argument("--algorithm-rule", default="", help="regex, group 1 is the label")
    ap.add_argument("--scale-rule", default="", help="regex, group 1 is the factor")
    ap.add_argument("--split", default="all", choices=["train", "test", "all"])
    ap.add_argument("--root", default=".", help="dataset root the paths are relative to")
    ap.add_argument("--check", action="store_true", help="require referenced files to exist")
    ap.add_argument("--out", required=True, help="manifest to write")
    args = ap.parse_args()

    if "=>" not in args.ref_rule:
        sys.exit("error: --ref-rule must look like 'pattern=>replacement'")
    ref_pat, ref_rep = args.ref_rule.split("=>", 1)

    rows = sniff_rows(args.scores)
    if not rows:
        sys.exit("error: score file is empty")
    header = None
    if not (args.test_col.isdigit() and args.mos_col.isdigit()):
        header = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
    test_of = column_picker(args.test_col, header)
    mos_of = column_picker(args.mos_col, header)

    root = Path(args.root)
    out_rows = []
    for lineno, row in enumerate(rows, 2 if header else 1):
        test_path = test_of(row).strip()
        mos = float(mos_of(row))
        ref_path = re.sub(ref_pat, ref_rep, test_path)
        if ref_path == test_path:
            sys.exit(f"error: --ref-rule left '{test_path}' unchanged (row {lineno})")
        algorithm = "unknown"
        if args.algorithm_rule:
            m = re.search(args.algorithm_rule, test_path)
            if not m:
                sys.exit(f"error: --algorithm-rule missed '{test_path}' (row {lineno})")
            algorithm = m.group(1)
        scale = "0"
        if args.scale_rule:
            m = re.search(args.scale_rule, test_path)
            if not m:
                sys.exit(f"error: --scale-rule missed '{test_path}' (row {lineno})")
            scale = m.group(1)
        if args.check:
            for p in (ref_path, test_path):
                if not (root / p).is_file():
                    sys.exit(f"error: {root / p} does not exist (row {lineno})")
        out_rows.append((ref_path, test_path, mos, algorithm, scale, args.split))

    with open(args.out, "w", encoding="utf-8", newline="") as f:
        f.write("ref_path,test_path,mos,algorithm,scale,split\n")
        for r in out_rows:
            f.write(",".join(str(c) for c in r) + "\n")
    print(f"wrote {len(out_rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
