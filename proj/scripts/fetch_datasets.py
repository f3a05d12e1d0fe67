#!/usr/bin/env python3
"""Download the two benchmark graphs that are not shipped in data/.

dolphins.txt    Lusseau's bottlenose dolphin network, from Mark Newman's
                network data page (GML inside a zip).
email-Enron.txt SNAP Enron email graph (gzipped edge list).

Both are written as whitespace separated edge lists that the loader reads
with --ids numeric.
"""

import argparse
import gzip
import io
import re
import sys
import urllib.request
import zipfile
from pathlib import Path

DOLPHINS_URL = "http://www-personal.umich.edu/~mejn/netdata/dolphins.zip"
ENRON_URL = "https://snap.stanford.edu/data/email-Enron.txt.gz"


def fetch(url):
    print(f"fetching {url}", file=sys.stderr)
    with urllib.request.urlopen(url, timeout=120) as resp:
        return resp.read()


def gml_edges(text):
    # the dolphins file is flat enough that source/target pairs can be read
    # straight off the edge blocks
    edges = []
    for block in re.findall(r"edge\s*\[(.*?)\]", text, flags=re.S):
        s = re.search(r"source\s+(-?\d+)", block)
        t = re.search(r"target\s+(-?\d+)", block)
        if not s or not t:
            raise ValueError(f"edge block without source/target: {block!r}")
        edges.append((int(s.group(1)), int(t.group(1))))
    return edges


def dolphins(out_dir):
    raw = fetch(DOLPHINS_URL)
    with zipfile.ZipFile(io.BytesIO(raw)) as z:
        name = next(n for n in z.namelist() if n.endswith(".gml"))
        text = z.read(name).decode("utf-8", errors="replace")
    edges = gml_edges(text)
    path = out_dir / "dolphins.txt"
    with path.open("w") as f:
        f.write(f"# Lusseau bottlenose dolphins, {DOLPHINS_URL}\n")
        f.write("# Node ids are the GML node ids.\n")
        for u, v in edges:
            f.write(f"{u}\t{v}\n")
    print(f"wrote {path} ({len(edges)} edges)", file=sys.stderr)


def enron(out_dir):
    raw = gzip.decompress(fetch(ENRON_URL))
    path = out_dir / "email-Enron.txt"
    path.write_bytes(raw)
    print(f"wrote {path} ({len(raw)} bytes)", file=sys.stderr)


def main():
    here = Path(__file__).resolve().parent
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=here.parent / "data")
    ap.add_argument("--only", choices=["dolphins", "enron"])
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    if args.only in (None, "dolphins"):
        dolphins(args.out)
    if args.only in (None, "enron"):
        enron(args.out)


if __name__ == "__main__":
    main()
