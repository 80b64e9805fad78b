#!/usr/bin/env python3
"""Record a UCI session per position, in the "> sent" / "< received" log
format the store keeps, so it can be replayed as a parser fixture.

    capture_uci_transcript.py --depth 12 --out DIR --name start \
        --fen "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1" -- node stockfish.js
"""

import argparse
import pathlib
import subprocess
import sys


class Engine:
    def __init__(self, cmd):
        self.proc = subprocess.Popen(cmd, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1)
        self.log = []

    def send(self, line):
        self.log.append("> " + line)
        self.proc.stdin.write(line + "\n")
        self.proc.stdin.flush()

    def until(self, prefix):
        while True:
            line = self.proc.stdout.readline()
            if not line:
                sys.exit("engine closed its output")
            line = line.rstrip("\r\n")
            self.log.append("< " + line)
            if line.split(" ")[0] == prefix:
                return line

    def close(self):
        self.proc.stdin.write("quit\n")
        self.proc.stdin.flush()
        self.proc.wait(timeout=10)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--fen", required=True)
    ap.add_argument("--name", required=True)
    ap.add_argument("--depth", type=int, default=20)
    ap.add_argument("--multipv", type=int, default=1)
    ap.add_argument("--out", type=pathlib.Path, required=True)
    ap.add_argument("engine", nargs="+")
    args = ap.parse_args()

    e = Engine(args.engine)
    e.send("uci")
    e.until("uciok")
    e.send(f"setoption name MultiPV value {args.multipv}")
    e.send("isready")
    e.until("readyok")
    e.send(f"position fen {args.fen}")
    e.send(f"go depth {args.depth}")
    e.until("bestmove")
    e.close()

    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / f"{args.name}.log").write_text("\n".join(e.log) + "\n")


if __name__ == "__main__":
    main()
