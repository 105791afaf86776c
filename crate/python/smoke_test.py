"""Smoke test for the dgmf Python bindings.

Install first:  pip install --no-build-isolation -e crates/py
Run:            python3 python/smoke_test.py
"""

import json
import pathlib
import sys

import dgmf

BUNDLES = pathlib.Path(__file__).resolve().parent.parent / "bundles"


def check(cond, msg):
    if not cond:
        print(f"FAIL {msg}")
        sys.exit(1)
    print(f"ok   {msg}")


def main():
    check(dgmf.canonical_poly("(x+1)^2 - 2*x", ["x", "y"]) == "x^2 + 1", "polynomial canonical form")
    check(dgmf.canonical_poly("x/2", ["x"], 0) == "1/2*x", "rational coefficients")

    e1 = (BUNDLES / "e1.json").read_text()
    check(dgmf.demo_bundle("E1") == e1, "demo bundle matches the shipped E1 file")
    report = dgmf.validate(e1)
    check(report["passed"] and len(report["checks"]) >= 15, "E1 validates")

    faulty = dgmf.validate((BUNDLES / "faulty_e1.json").read_text())
    failed = {c["name"] for c in faulty["checks"] if not c["passed"]}
    check("associativity" in failed, "fault-injected bundle names its failures")

    out = dgmf.build(e1, variant="reduced", resolution="acute")
    check(out["rank"] == 6 and out["f"] == "x + 1", "E1 reduced factorization has rank 6")
    check(out["resolution_ranks"][:4] == [1, 4, 6, 6], "E1 acute resolution ranks")

    e2 = (BUNDLES / "e2.json").read_text()
    try:
        dgmf.build(e2, variant="reduced")
        check(False, "E2 reduced factorization is refused")
    except dgmf.PreconditionError:
        check(True, "E2 reduced factorization is refused")
    out = dgmf.build(e2, variant="full", resolution="N")
    check(out["rank"] == 11 and all(r["passed"] for r in out["reports"].values()), "E2 full factorization")

    e3 = (BUNDLES / "e3_differentials.json").read_text()
    out = dgmf.build(e3, variant="reduced", solve_mult=True, seed=0)
    check(out["rank"] == 14, "E3 via the solver")

    try:
        dgmf.validate("{")
        check(False, "malformed JSON raises InputError")
    except dgmf.InputError:
        check(True, "malformed JSON raises InputError")
    check(json.loads(dgmf.demo_bundle("E2"))["f"] == "u", "E2 bundle is JSON")
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
