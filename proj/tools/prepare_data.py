#!/usr/bin/env python3
"""Convert raw UCI/KEEL files into the canonical CSV layout read by semisup.

Canonical layout: no header, comma separated, the feature columns followed by
one label column. The label column holds "0" for the majority class and "1"
for the minority class.

Usage:
    prepare_data.py --raw <dir with raw files> --out <data dir>

Recognized raw inputs (any subset may be present):

    haberman.dat, ionosphere.dat, pima.dat, sonar.dat, wdbc.dat
        KEEL .dat files (ARFF-like '@' header, label in the last column).
        ionosphere.dat from KEEL already drops the constant second UCI
        attribute, leaving 33 features.
    haberman.data, ionosphere.data, pima.data (pima-indians-diabetes.data),
    sonar.all-data, wdbc.data
        Raw UCI files. For ionosphere the constant second column is dropped.
        For wdbc the id column is dropped and the diagnosis column moved last.
    SPECT.train + SPECT.test, SPECTF.train + SPECTF.test
        Raw UCI files, label in the first column. Train and test are
        concatenated (train first) to give the full 267 objects.
    transfusion.data
        Raw UCI file with a header row. The Monetary column is exactly 250x
        Frequency and is dropped, leaving 3 features.
"""

import argparse
import collections
import pathlib
import sys


def read_rows(path, skip_header=False):
    rows = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line or line.startswith("@") or line.startswith("%"):
                continue
            if skip_header and i == 0:
                continue
            rows.append([c.strip() for c in line.split(",")])
    return rows


def canonical(rows):
    """rows: list of (features, label token). Returns canonical CSV lines."""
    counts = collections.Counter(label for _, label in rows)
    if len(counts) != 2:
        raise ValueError(f"expected two classes, found {sorted(counts)}")
    order = []
    for _, label in rows:
        if label not in order:
            order.append(label)
    # majority first; ties keep first occurrence
    order.sort(key=lambda t: -counts[t])
    code = {order[0]: "0", order[1]: "1"}
    out = []
    for feats, label in rows:
        for v in feats:
            float(v)
        out.append(",".join(feats + [code[label]]))
    return out


def label_last(rows, drop=()):
    return [([v for j, v in enumerate(r[:-1]) if j not in drop], r[-1]) for r in rows]


def label_first(rows):
    return [(r[1:], r[0]) for r in rows]


def convert(raw, name):
    def p(f):
        return raw / f

    if name == "spect" or name == "spectf":
        stem = name.upper()
        if not (p(f"{stem}.train").exists() and p(f"{stem}.test").exists()):
            return None
        return label_first(read_rows(p(f"{stem}.train")) + read_rows(p(f"{stem}.test")))
    if name == "transfusion":
        if not p("transfusion.data").exists():
            return None
        return label_last(read_rows(p("transfusion.data"), skip_header=True), drop=(2,))

    if p(f"{name}.dat").exists():
        return label_last(read_rows(p(f"{name}.dat")))

    uci = {
        "haberman": ["haberman.data"],
        "ionosphere": ["ionosphere.data"],
        "pima": ["pima.data", "pima-indians-diabetes.data"],
        "sonar": ["sonar.all-data", "sonar.data"],
        "wdbc": ["wdbc.data"],
    }[name]
    for f in uci:
        if p(f).exists():
            rows = read_rows(p(f))
            if name == "ionosphere":
                return label_last(rows, drop=(1,))
            if name == "wdbc":
                return [(r[2:], r[1]) for r in rows]
            return label_last(rows)
    return None


NAMES = ["haberman", "ionosphere", "pima", "sonar", "spect", "spectf", "transfusion", "wdbc"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--raw", required=True, type=pathlib.Path)
    ap.add_argument("--out", required=True, type=pathlib.Path)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    missing = []
    for name in NAMES:
        rows = convert(args.raw, name)
        if rows is None:
            missing.append(name)
            continue
        lines = canonical(rows)
        (args.out / f"{name}.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"{name}: {len(lines)} objects, {len(rows[0][0])} features")
    for name in missing:
        print(f"{name}: no raw input found, skipped", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
