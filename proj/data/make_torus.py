#!/usr/bin/env python3
"""Writes torus.json: a 6x6 grid triangulation of a standing torus, filtered by the
sub-level sets of its height with vertex heights quantized to the levels k/5.

Level 0 is the bottom vertex, 2 the lower saddle, 4 the upper saddle; 1, 3 and 5 fill the
regular stretches in between, so the only critical values are 0, 2/5, 4/5 and 1.
"""
import json
import math
import pathlib

N = M = 6
R, r = 2.0, 1.0


def name(i, j):
    return f"{i % N}:{j % M}"


def level(i, j):
    h = -(R + r * math.cos(2 * math.pi * j / M)) * math.cos(2 * math.pi * i / N)
    lo, hi, eps = -(R - r), R - r, 1e-9
    if i == 0 and j == 0:
        return 0
    if h < lo - eps:
        return 1
    if h < lo + eps:
        return 2
    if h < hi - eps:
        return 3
    if h < hi + eps:
        return 4
    return 5


def main():
    births = {name(i, j): f"{level(i, j)}/5" for i in range(N) for j in range(M)}
    simplices = []
    for i in range(N):
        for j in range(M):
            simplices.append({"vertices": [name(i, j), name(i + 1, j), name(i + 1, j + 1)]})
            simplices.append({"vertices": [name(i, j), name(i, j + 1), name(i + 1, j + 1)]})
    doc = {"vertex_births": births, "simplices": simplices}
    out = pathlib.Path(__file__).with_name("torus.json")
    out.write_text(json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    main()
