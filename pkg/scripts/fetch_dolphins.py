#!/usr/bin/env python3
"""Fetch the dolphin social network used by the convergence sweep demo.

The dataset (62 bottlenose dolphins, 159 ties; Lusseau et al. 2003) is
distributed by its maintainers in GML form:

    https://websites.umich.edu/~mejn/netdata/dolphins.zip

This script downloads the archive, extracts the GML, and writes a plain
edge list to tests/fixtures/dolphins.edges. The acceptance suite uses the
file when present and falls back to the committed 34-node social-network
fixture offline, so running this is optional.
"""

import io
import re
import sys
import urllib.request
import zipfile
from pathlib import Path

URL = "https://websites.umich.edu/~mejn/netdata/dolphins.zip"
DEST = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "dolphins.edges"


def gml_edges(text: str):
    # minimal GML edge scan: "edge [ source <i> target <j> ]"
    for block in re.finditer(r"edge\s*\[(.*?)\]", text, flags=re.S):
        body = block.group(1)
        src = re.search(r"source\s+(\d+)", body)
        dst = re.search(r"target\s+(\d+)", body)
        if src and dst:
            yield int(src.group(1)), int(dst.group(1))


def main() -> int:
    print(f"downloading {URL} ...")
    with urllib.request.urlopen(URL, timeout=60) as response:
        payload = response.read()
    with zipfile.ZipFile(io.BytesIO(payload)) as archive:
        name = next(n for n in archive.namelist() if n.endswith(".gml"))
        text = archive.read(name).decode("utf-8", errors="replace")
    edges = sorted({(min(u, v), max(u, v)) for u, v in gml_edges(text)})
    if not edges:
        print("no edges parsed; aborting", file=sys.stderr)
        return 1
    DEST.parent.mkdir(parents=True, exist_ok=True)
    with open(DEST, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(f"{u} {v}" for u, v in edges) + "\n")
    print(f"wrote {len(edges)} edges to {DEST}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
