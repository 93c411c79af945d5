"""Command-line front end.

Exit codes: 0 pass, 1 check failed, 2 invalid input, 3 derivation failed,
4 ineligible (a wing factor is singular).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .core import DEFAULT_TOL, BlockPencil, MatrixPolynomial, dump_json, integer_fixture, matrices_equal
from .fixtures import golden_checks
from .kronecker import (EBKError, TheoremViolation, antidiagonal_sum, check_cas, ebk_for, enumerate_ebk,
                        is_wing, permute_to_ebk)
from .pencils import GfprSpec, fiedler, gfp, gfpr, is_proper
from .tuples import parse_tuple
from .verify import pencil_eigs, polyeig_reference, strong_linearization_check

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DERIVE, EXIT_INELIGIBLE = 0, 1, 2, 3, 4
SPECTRAL_TOL = 1e-8


class InputError(Exception):
    pass


def default_tol() -> float:
    env = os.environ.get("FIEDLERKRON_TOL")
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise InputError(f"FIEDLERKRON_TOL={env!r} is not a number") from exc
    return SPECTRAL_TOL


def _polynomial(args) -> MatrixPolynomial:
    if args.input:
        with open(args.input) as fh:
            return MatrixPolynomial.from_json(json.load(fh))
    if args.k is None:
        raise InputError("--k is required without --input")
    if args.seed is not None:
        return MatrixPolynomial.random(args.n, args.k, np.random.default_rng(args.seed))
    return integer_fixture(args.k, args.n)


def _tuple(text):
    return parse_tuple(text or "")


def _spec(args, P: MatrixPolynomial) -> GfprSpec:
    if args.spec:
        with open(args.spec) as fh:
            data = json.load(fh)
        data.setdefault("P", P.to_json())
        return GfprSpec.from_json(data)
    q = _tuple(args.q)
    h = args.h if args.h is not None else len(q) - 1
    return GfprSpec(P, h, q, _tuple(args.z), _tuple(args.lq), _tuple(args.rq), _tuple(args.lz), _tuple(args.rz))


def _build(args, P):
    """Return ``(pencil, classification, derive)`` where ``derive()`` yields the EBK view."""
    fam = args.family
    if fam == "fiedler":
        q = _tuple(args.q)
        return fiedler(P, q), "Fiedler pencil", lambda: ebk_for("fiedler", P, q=q)
    if fam == "gfp":
        q, z = _tuple(args.q), _tuple(args.z)
        L = gfp(P, q, z)
        label = "proper GFP" if is_proper(P.grade, q, z) else "nonproper GFP"
        return L, label, lambda: ebk_for("gfp", P, q=q, z=z)
    if fam in ("gfpr", "fpr"):
        spec = _spec(args, P)
        if spec.outer_empty:
            label = "GFPR (a GFP)"
        else:
            label = "FPR" if spec.is_fpr else "GFPR"
        return gfpr(spec), label, lambda: ebk_for("gfpr", P, spec=spec)
    raise InputError(f"unknown family {fam!r}")


def _partition(text):
    try:
        p, q = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"--partition expects 'p,q', got {text!r}") from exc
    return p, q


def _load_pencil(path) -> BlockPencil:
    with open(path) as fh:
        return BlockPencil.from_json(json.load(fh))


def _source(args):
    """Pencil, polynomial (or None) and derivation callback for commands that accept either input."""
    if args.pencil:
        L = _load_pencil(args.pencil)
        P = _polynomial(args) if (args.input or args.k) else None
        if args.partition:
            p, q = _partition(args.partition)
            derive = lambda: permute_to_ebk(L, p, q, P)
        else:
            def derive():
                views = enumerate_ebk(L, P, permute=True)
                if not views:
                    raise EBKError("no EBK partition found")
                return views[0]
        return L, P, "loaded pencil", derive
    P = _polynomial(args)
    L, label, derive = _build(args, P)
    if args.partition:
        p, q = _partition(args.partition)
        derive = lambda: permute_to_ebk(L, p, q, P)
    return L, P, label, derive


def _emit(obj, out):
    text = dump_json(obj, out)
    if out is None:
        print(text)


def _block_map(view) -> str:
    rows = []
    k = view.C.grid_rows
    for i in range(k):
        cells = []
        for j in range(k):
            if i > view.q and j > view.p:
                cells.append("0")
            elif i > view.q:
                cells.append("K1")
            elif j > view.p:
                cells.append("K2'")
            else:
                cells.append("M")
        rows.append(f"  row {view.permL.perm[i]:>2} | " + " ".join(f"{c:>3}" for c in cells))
    head = "  col    | " + " ".join(f"{c:>3}" for c in view.permR.perm)
    return "\n".join([head] + rows)


def cmd_build(args) -> int:
    P = _polynomial(args)
    L, label, _ = _build(args, P)
    print(f"family: {label}; k = {P.grade}, n = {P.n}")
    if args.out:
        dump_json(L.to_json(), args.out)
        print(f"pencil written to {args.out}")
    else:
        print(dump_json(L.to_json()))
    return EXIT_OK


def cmd_permute(args) -> int:
    L, P, label, derive = _source(args)
    view = derive()
    print(f"{label}: extended ({view.p},{view.n},{view.q},{view.n})-block Kronecker pencil")
    print(f"permL = {view.permL.perm}, permR = {view.permR.perm}")
    print(f"wing rows {view.wing_rows}, wing columns {view.wing_cols}")
    print(_block_map(view))
    print(f"AS verified: {view.as_verified}; minimal-basis wings: {list(view.minimal_basis_flags)}")
    if view.p:
        print(f"K1 factor:\n{view.factorB1}")
    if view.q:
        print(f"K2 factor:\n{view.factorB2}")
    if args.out:
        dump_json(view.to_json(), args.out)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    L, P, _, _ = _source(args)
    views = enumerate_ebk(L, P, permute=args.permute)
    mode = "after block permutation" if args.permute else "in place"
    print(f"{len(views)} partition(s) {mode}:")
    for v in views:
        print(f"  (p, q) = ({v.p}, {v.q}); permL = {v.permL.perm}, permR = {v.permR.perm}; AS: {v.as_verified}")
    if args.out:
        dump_json([v.to_json() for v in views], args.out)
    return EXIT_OK if views else EXIT_DERIVE


def cmd_verify(args) -> int:
    L, P, label, derive = _source(args)
    if P is None:
        raise InputError("verify needs a polynomial (--input or --k)")
    tol = args.tol if args.tol is not None else default_tol()
    view = derive()
    report = {"family": label, "p": view.p, "q": view.q, "checks": {}}
    failed = []
    bad_as = [s for s in range(P.grade + 1)
              if not check_as_at(view.M, P, s)]
    report["checks"]["AS"] = not bad_as
    failed += [f"AS({s})" for s in bad_as]
    cas = check_cas(view.C, P)
    report["checks"]["CAS"] = cas
    if not cas:
        failed.append("CAS")
    wings = is_wing(view.K1, DEFAULT_TOL) and is_wing(view.top_right_wing, DEFAULT_TOL)
    report["checks"]["wings"] = wings
    if not wings:
        failed.append("wing")
    eligible = view.eligible
    report["checks"]["minimalBasisFlags"] = list(view.minimal_basis_flags)
    if failed:
        print(f"FAIL: {', '.join(failed)}")
        report["status"] = "fail"
        _emit(report, args.out)
        return EXIT_FAIL
    lin = strong_linearization_check(L, P, tol, eligible=eligible)
    report["spectral"] = lin.to_json()
    report["status"] = lin.status
    if args.out:
        dump_json(report, args.out)
    print(f"{label}: ({view.p},{view.q}) AS ok, CAS ok, wings ok; spectral check: {lin.status}"
          + (f" (max rel err {lin.max_rel_error:.2e})" if lin.status != "ineligible" else ""))
    for m in lin.messages:
        print(f"  {m}")
    if lin.status == "ineligible":
        return EXIT_INELIGIBLE
    return EXIT_OK if lin.passed else EXIT_FAIL


def check_as_at(M, P, s) -> bool:
    got = antidiagonal_sum(M, s, P.grade)
    return matrices_equal(got, P[s]) or matrices_equal(got, P[s], DEFAULT_TOL)


def cmd_eig(args) -> int:
    L, P, label, _ = _source(args)
    rep = pencil_eigs(L)
    out = {"pencil": rep.to_json()}
    print(f"{label}: {rep.finite.size} finite, {rep.inf_count} infinite eigenvalue(s)")
    for z in rep.finite:
        print(f"  {z.real:+.12e} {z.imag:+.12e}i")
    if P is not None:
        out["reference"] = polyeig_reference(P).to_json()
    if args.out:
        dump_json(out, args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = golden_checks()
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fiedlerkron",
                                     description="Fiedler-like pencils as extended block Kronecker pencils.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, pencil_input=True):
        p.add_argument("--family", choices=["fiedler", "gfp", "gfpr", "fpr"], default="fiedler")
        p.add_argument("--k", type=int, help="grade")
        p.add_argument("--n", type=int, default=2, help="block size")
        p.add_argument("--q", help='index tuple, e.g. "0,2,4,1,3,5"')
        p.add_argument("--z", help='negative index tuple, e.g. "-1,-6,-5"; "-0" allowed for GFP')
        for name in ("lq", "rq", "lz", "rz"):
            p.add_argument(f"--{name}", help="outer GFPR tuple")
        p.add_argument("--h", type=int, help="GFPR split index (default len(q)-1)")
        p.add_argument("--spec", help="GfprSpec JSON file")
        p.add_argument("--seed", type=int, help="random complex polynomial with this seed")
        p.add_argument("--tol", type=float, help="spectral tolerance (default 1e-8 or $FIEDLERKRON_TOL)")
        p.add_argument("--input", help="polynomial JSON file")
        p.add_argument("--out", help="output JSON file")
        if pencil_input:
            p.add_argument("--pencil", help="pencil JSON file instead of building one")
            p.add_argument("--partition", help="'p,q' to search at a fixed partition")

    common(sub.add_parser("build", help="build a pencil"), pencil_input=False)
    common(sub.add_parser("permute", help="derive the EBK form"))
    e = sub.add_parser("enumerate", help="list all EBK partitions")
    common(e)
    e.add_argument("--permute", action="store_true", help="allow block permutations")
    common(sub.add_parser("verify", help="structural and spectral verification"))
    common(sub.add_parser("eig", help="eigenvalues of a pencil"))
    sub.add_parser("selftest", help="reproduce the built-in golden examples")
    return parser


COMMANDS = {"build": cmd_build, "permute": cmd_permute, "enumerate": cmd_enumerate,
            "verify": cmd_verify, "eig": cmd_eig, "selftest": cmd_selftest}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except EBKError as exc:
        print(f"derivation failed: {exc}", file=sys.stderr)
        return EXIT_DERIVE
    except (InputError, ValueError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TheoremViolation as exc:
        print(f"derivation failed: {exc}", file=sys.stderr)
        return EXIT_DERIVE


if __name__ == "__main__":
    sys.exit(main())
