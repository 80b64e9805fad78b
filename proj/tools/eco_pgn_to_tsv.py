#!/usr/bin/env python3
"""Convert an ECO classification PGN (tags ECO/Opening/Variation, movetext ending in '*')
into the tab-separated table read by load_eco: code, name, SAN line."""

import re
import sys

TAG = re.compile(r'\[(\w+)\s+"((?:[^"\\]|\\.)*)"\]')


def blocks(text):
    tags, moves = {}, []
    depth = 0
    for line in text.splitlines():
        if depth:
            depth -= line.count("}")
            continue
        if line.startswith("{"):
            depth = line.count("{") - line.count("}")
            continue
        line = line.strip()
        if line.startswith("["):
            if moves:
                yield tags, " ".join(moves)
                tags, moves = {}, []
            for k, v in TAG.findall(line):
                tags[k] = v
        elif line:
            moves.append(line)
            if line.endswith("*"):
                yield tags, " ".join(moves)
                tags, moves = {}, []


def main(src, dst):
    with open(src, encoding="latin-1") as f:
        text = f.read()
    out = ["# code\tname\tmoves"]
    for tags, moves in blocks(text):
        moves = re.sub(r"\s*\*\s*$", "", moves)
        name = tags.get("Opening", "")
        if tags.get("Variation"):
            name += ": " + tags["Variation"]
        out.append(f"{tags['ECO']}\t{name}\t{moves}")
    with open(dst, "w", encoding="utf-8") as f:
        f.write("\n".join(out) + "\n")
    print(f"{len(out) - 1} lines written to {dst}")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit("usage: eco_pgn_to_tsv.py ECO.pgn OUT.tsv")
    main(sys.argv[1], sys.argv[2])
