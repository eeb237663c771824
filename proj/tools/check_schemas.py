#!/usr/bin/env python3
"""Runs each seqbar subcommand and validates its JSON output against the bundled schemas."""

import argparse
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("cli")
    ap.add_argument("data", type=pathlib.Path)
    ap.add_argument("schemas", type=pathlib.Path)
    args = ap.parse_args()

    def schema(name):
        return json.loads((args.schemas / f"{name}.schema.json").read_text())

    for s in args.schemas.glob("*.schema.json"):
        jsonschema.Draft202012Validator.check_schema(json.loads(s.read_text()))

    failures = 0

    def check(label, doc, name):
        nonlocal failures
        try:
            jsonschema.validate(doc, schema(name), cls=jsonschema.Draft202012Validator)
            print(f"ok   {label}")
        except jsonschema.ValidationError as e:
            failures += 1
            print(f"FAIL {label}: {e.message} at {list(e.absolute_path)}")

    def run(label, argv, name, expect=0):
        nonlocal failures
        proc = subprocess.run([args.cli, *argv], capture_output=True, text=True)
        if proc.returncode != expect:
            failures += 1
            print(f"FAIL {label}: exit {proc.returncode}, expected {expect}\n{proc.stderr}")
            return None
        doc = json.loads(proc.stdout)
        check(label, doc, name)
        return doc

    d = args.data
    for f in ("worked_example.json", "worked_example_perturbed.json"):
        check(f, json.loads((d / f).read_text()), "dataset")
    for f in ("three_chain.json", "octahedron.json"):
        check(f, json.loads((d / f).read_text()), "poset")
    check("torus.json", json.loads((d / "torus.json").read_text()), "simplicial-complex")

    we = str(d / "worked_example.json")
    run("barcode two", ["barcode", "--dataset", we], "barcode")
    run("barcode one capped", ["barcode", "--dataset", we, "--filtration", "one", "--max-gamma", "1"], "barcode")
    run("stability", ["stability", we, str(d / "worked_example_perturbed.json"), "--epsilon", "1/5"], "stability")
    run("homology poset", ["homology", "--poset", str(d / "three_chain.json")], "persistence")
    run("homology order", ["homology", "--poset", str(d / "octahedron.json"), "--kind", "order"], "persistence")
    run("homology complex", ["homology", "--complex", str(d / "torus.json")], "persistence")
    run("homology dataset", ["homology", "--dataset", we, "--max-gamma", "1", "--max-delta", "1"], "persistence")
    run("verify-embedding", ["verify-embedding", "--poset", str(d / "three_chain.json")], "embedding")
    run("verify-embedding order", ["verify-embedding", "--poset", str(d / "three_chain.json"), "--kind", "order"],
        "embedding", expect=4)
    run("verify-embedding dataset", ["verify-embedding", "--dataset", we, "--restrict"], "embedding")
    run("verify-embedding random", ["verify-embedding", "--random", "20", "--seed", "3"], "random-embedding")
    run("verify-embedding random order", ["verify-embedding", "--random", "5", "--seed", "3", "--kind", "order"],
        "random-embedding", expect=4)

    dep = d / "depmap"
    run("ingest", ["ingest", "--dependency", str(dep / "gene_dependency.csv"),
                   "--hotspot", str(dep / "mutations_bool_hotspot.csv"),
                   "--damaging", str(dep / "mutations_bool_damaging.csv"),
                   "--nonconserving", str(dep / "mutations_bool_nonconserving.csv")], "dataset")

    with tempfile.TemporaryDirectory() as tmp:
        cells = pathlib.Path(tmp) / "cells.json"
        subprocess.run([args.cli, "homology", "--poset", str(d / "three_chain.json"), "--dump-complex", str(cells)],
                       check=True, capture_output=True)
        check("complex dump", json.loads(cells.read_text()), "complex")
        subprocess.run([args.cli, "homology", "--complex", str(d / "torus.json"), "--dump-complex", str(cells)],
                       check=True, capture_output=True)
        check("complex dump simplicial", json.loads(cells.read_text()), "complex")

    # Mutated documents must be rejected.
    def reject(label, doc, name):
        nonlocal failures
        try:
            jsonschema.validate(doc, schema(name), cls=jsonschema.Draft202012Validator)
            failures += 1
            print(f"FAIL {label}: accepted")
        except jsonschema.ValidationError:
            print(f"ok   {label} rejected")

    bars = run("barcode again", ["barcode", "--dataset", we], "barcode")
    if bars:
        bad = json.loads(json.dumps(bars))
        bad["bars"][0]["death"] = "0.5"
        reject("decimal death", bad, "barcode")
        bad = json.loads(json.dumps(bars))
        bad["bars"][0]["extra"] = 1
        reject("unknown bar field", bad, "barcode")
    reject("missing ground", {"antecedent_vars": {}, "consequent_vars": {}}, "dataset")
    reject("negative dim", {"metadata": {"complex": "order", "cells": 1, "cells_per_dim": [1], "coefficients": "Z/2"},
                            "bars": [{"dim": -1, "birth": "0", "death": "inf", "multiplicity": 1}]}, "persistence")

    print(f"{failures} schema failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
