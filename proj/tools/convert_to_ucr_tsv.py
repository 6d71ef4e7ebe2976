#!/usr/bin/env python3
"""Convert sktime/aeon `.ts` files or legacy whitespace UCR `.txt` files to
UCR-2018 TSV (label first, tab separated)."""
import argparse
import pathlib


def read_ts(path):
    rows = []
    in_data = False
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower().startswith("@data"):
            in_data = True
            continue
        if not in_data or line.startswith("@"):
            continue
        *dims, label = line.split(":")
        if len(dims) != 1:
            raise ValueError(f"{path}: multivariate series are not supported")
        values = [v if v not in ("?", "") else "NaN" for v in dims[0].split(",")]
        rows.append((label, values))
    return rows


def read_txt(path):
    rows = []
    for line in path.read_text().splitlines():
        fields = line.replace(",", " ").split()
        if not fields:
            continue
        label = fields[0]
        try:
            f = float(label)
            if f.is_integer():
                label = str(int(f))
        except ValueError:
            pass
        rows.append((label, fields[1:]))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("src", type=pathlib.Path)
    ap.add_argument("dst", type=pathlib.Path)
    args = ap.parse_args()
    rows = read_ts(args.src) if args.src.suffix == ".ts" else read_txt(args.src)
    args.dst.parent.mkdir(parents=True, exist_ok=True)
    with args.dst.open("w") as out:
        for label, values in rows:
            out.write("\t".join([label, *values]) + "\n")


if __name__ == "__main__":
    main()
