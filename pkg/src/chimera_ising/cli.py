"""Command line front end.

Subcommands:

* generate  --r R --couplings DIST --fields DIST --seed S --out F
* solve     --algo {exact|ptas|witness} --in F [--epsilon E]
            [--out-assignment F2] [--report F3]
* bounds    --in F [--report F3]
* verify    --in F --assignment F2 [--report F3]
* bench     --r-list 8,16 --epsilon-list 1.0,0.8 --seeds N --csv F [--jobs J]

Every command prints a one-line JSON result to stdout and exits 0, or a
one-line JSON {"error": ...} to stderr and exits 1.  Timing lives only in
the report's "timing" section and in the bench CSV wall_ms column, so
result payloads are byte-stable run to run.

`solve --algo exact` picks the exhaustive oracle when n <= 25, else the
whole-graph DP when the strip width 8r fits its budget, and refuses
otherwise rather than silently approximating.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import bounds as bounds_mod
from .hamiltonian import evaluate, magnitude_sums
from .instance_io import (Distribution, GeneratorSpec, generate,
                          load_assignment, load_instance, save_assignment,
                          save_instance)
from .oracle import ORACLE_MAX_VERTICES, SmallProblem, brute_force
from .ptas import PtasParams, _class_count, ptas_solve
from .strip_dp import WIDTH_BUDGET, extract_strips, scatter_spins, solve_strip

# relative slack for re-verifying reported energies and bound values
VERIFY_REL_TOL = 1e-12
# absolute slack when checking energy <= claimed bound
CLAIM_SLACK = 1e-9


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def _bound_levels(sums):
    total = sums.a0 + sums.a1 + sums.a01 + sums.b
    trivial = -(sums.a0 + sums.a1)
    cert = -(bounds_mod.C_LOWER / (3.0 * bounds_mod.C_LOWER + 4.0)) * total
    return trivial, cert


def _params_from_epsilon(eps: float) -> PtasParams:
    # the CLI admits epsilon = 1 (t = 2) for benchmarking the widest cut
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"epsilon {eps} outside (0, 1]")
    return PtasParams(float(eps), _class_count(eps))


def cmd_generate(args) -> int:
    spec = GeneratorSpec(Distribution.parse(args.couplings),
                         Distribution.parse(args.fields), args.seed)
    inst = generate(args.r, spec)
    _write(args.out, save_instance(inst))
    print(json.dumps({"r": args.r, "n": inst.n, "out": args.out}))
    return 0


def _solve_exact(inst):
    if inst.n <= ORACLE_MAX_VERTICES:
        energy, spins = brute_force(SmallProblem.from_instance(inst))
        return spins, "exact-oracle"
    if 8 * inst.r <= WIDTH_BUDGET:
        strips = extract_strips(inst, [])
        sols = [solve_strip(g) for g in strips]
        return scatter_spins(inst.n, strips, sols), "exact-dp"
    raise ValueError(
        f"exact solver refused: n={inst.n} exceeds the enumeration budget "
        f"{ORACLE_MAX_VERTICES} and width 8r={8 * inst.r} exceeds the DP "
        f"budget {WIDTH_BUDGET}; use --algo ptas")


def cmd_solve(args) -> int:
    inst = load_instance(_read(args.infile))
    sums = magnitude_sums(inst)
    trivial, cert = _bound_levels(sums)
    t0 = time.perf_counter()

    extra = {}
    if args.algo == "exact":
        spins, detail = _solve_exact(inst)
        claims = [{"name": "trivial_bound", "bound": trivial},
                  {"name": "certificate_bound", "bound": cert}]
        extra["method"] = detail
    elif args.algo == "ptas":
        if args.epsilon is None:
            raise ValueError("--algo ptas requires --epsilon")
        params = _params_from_epsilon(args.epsilon)
        res = ptas_solve(inst, params)
        spins = res.assignment
        claims = [
            {"name": "trivial_bound", "bound": trivial},
            {"name": "ptas_guarantee", "t": params.t,
             "bound": -(1.0 - 2.0 / params.t) * (sums.a0 + sums.a1)},
        ]
        extra["ptas"] = {
            "epsilon": params.epsilon, "t": params.t,
            "cut_layer": res.cut_layer, "k_chosen": res.k_chosen,
            "k_star": res.k_star, "strip_count": res.strip_count,
            "max_width": res.max_width, "removed_weight": res.removed_weight,
            "used_witness": res.used_witness,
        }
    else:
        report = bounds_mod.certificate(inst)
        spins = report.best_witness
        claims = [{"name": "trivial_bound", "bound": trivial},
                  {"name": "certificate_bound", "bound": cert}]
        extra["witness"] = {"best": report.best_witness_name,
                            "energies": report.witness_energies}

    wall_ms = (time.perf_counter() - t0) * 1000.0
    energy = evaluate(inst, spins).total
    result = {
        "algo": args.algo, "r": inst.r, "n": inst.n,
        "magnitude_sums": {"a0": sums.a0, "a1": sums.a1,
                           "a01": sums.a01, "b": sums.b},
        "energy": energy,
        "bounds": {"trivial": trivial, "certificate": cert},
        "claims": claims,
    }
    result.update(extra)
    if args.out_assignment:
        _write(args.out_assignment, save_assignment(spins, inst.r))
    if args.report:
        _write(args.report, json.dumps(
            {"result": result, "timing": {"wall_ms": wall_ms}}, indent=1))
    print(json.dumps(result))
    return 0


def cmd_bounds(args) -> int:
    inst = load_instance(_read(args.infile))
    t0 = time.perf_counter()
    report = bounds_mod.certificate(inst)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    result = {
        "r": inst.r, "n": inst.n,
        "magnitude_sums": {"a0": report.sums.a0, "a1": report.sums.a1,
                           "a01": report.sums.a01, "b": report.sums.b},
        "trivial_bound": report.trivial_bound,
        "certificate_bound": report.certificate_bound,
        "witness_energies": report.witness_energies,
        "best_witness": report.best_witness_name,
        "best_energy": report.best_energy,
    }
    if args.report:
        _write(args.report, json.dumps(
            {"result": result, "timing": {"wall_ms": wall_ms}}, indent=1))
    print(json.dumps(result))
    return 0


def _recompute_claim(name, claim, sums):
    if name == "trivial_bound":
        return -(sums.a0 + sums.a1)
    if name == "certificate_bound":
        total = sums.a0 + sums.a1 + sums.a01 + sums.b
        return -(bounds_mod.C_LOWER / (3.0 * bounds_mod.C_LOWER + 4.0)) * total
    if name == "ptas_guarantee":
        t = claim.get("t")
        if not isinstance(t, int) or t < 2:
            raise ValueError(f"claim {name!r} carries no valid t")
        return -(1.0 - 2.0 / t) * (sums.a0 + sums.a1)
    raise ValueError(f"unknown claim {name!r}")


def cmd_verify(args) -> int:
    inst = load_instance(_read(args.infile))
    spins, r = load_assignment(_read(args.assignment))
    if r != inst.r:
        raise ValueError(f"assignment r={r} does not match instance r={inst.r}")
    bd = evaluate(inst, spins)
    out = {"r": inst.r, "energy": bd.total,
           "m0": bd.m0, "m1": bd.m1, "m01": bd.m01, "d": bd.d}

    if args.report:
        rep = json.loads(_read(args.report)).get("result", {})
        sums = magnitude_sums(inst)
        reported = rep.get("energy")
        if (not isinstance(reported, (int, float)) or
                abs(reported - bd.total) > VERIFY_REL_TOL * max(1.0, abs(bd.total))):
            print(json.dumps({"error": "energy mismatch",
                              "reported": reported,
                              "recomputed": bd.total}), file=sys.stderr)
            return 1
        for claim in rep.get("claims", []):
            name = claim.get("name", "?")
            want = _recompute_claim(name, claim, sums)
            got = claim.get("bound")
            if (not isinstance(got, (int, float)) or
                    abs(got - want) > VERIFY_REL_TOL * max(1.0, abs(want))):
                print(json.dumps({"error": f"claim {name} bound mismatch",
                                  "reported": got, "recomputed": want}),
                      file=sys.stderr)
                return 1
            if bd.total > want + CLAIM_SLACK:
                print(json.dumps({"error": f"claim {name} violated",
                                  "bound": want, "energy": bd.total}),
                      file=sys.stderr)
                return 1
        out["claims_checked"] = len(rep.get("claims", []))

    print(json.dumps(out))
    return 0


def _bench_one(r, eps, seed):
    spec = GeneratorSpec(Distribution("gaussian", (0.0, 1.0)),
                         Distribution("gaussian", (0.0, 1.0)), seed)
    inst = generate(r, spec)
    params = _params_from_epsilon(eps)
    t0 = time.perf_counter()
    res = ptas_solve(inst, params)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    sums = magnitude_sums(inst)
    trivial, cert = _bound_levels(sums)
    ratio = res.energy / trivial if trivial != 0.0 else float("nan")
    return {"r": r, "epsilon": eps, "seed": seed, "algo": "ptas",
            "energy": repr(res.energy), "trivial_bound": repr(trivial),
            "certificate_bound": repr(cert), "ratio_vs_trivial": repr(ratio),
            "strips": res.strip_count, "max_width": res.max_width,
            "wall_ms": f"{wall_ms:.3f}"}


_CSV_COLUMNS = ["r", "epsilon", "seed", "algo", "energy", "trivial_bound",
                "certificate_bound", "ratio_vs_trivial", "strips",
                "max_width", "wall_ms"]


def cmd_bench(args) -> int:
    rs = [int(x) for x in args.r_list.split(",") if x.strip()]
    epss = [float(x) for x in args.epsilon_list.split(",") if x.strip()]
    if not rs or not epss or args.seeds < 1:
        raise ValueError("need nonempty r list, epsilon list and seeds >= 1")
    jobs = [(r, eps, seed) for r in rs for eps in epss
            for seed in range(args.seeds)]
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        rows = list(pool.map(lambda t: _bench_one(*t), jobs))
    rows.sort(key=lambda row: (row["r"], row["epsilon"], row["seed"]))
    with open(args.csv, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=_CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    print(json.dumps({"rows": len(rows), "csv": args.csv}))
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="chimera-ising",
        description="Ising ground-state solvers and bounds on Chimera graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a seeded random instance")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--couplings", required=True,
                   help="uniform-pm1 | gaussian(m,sd) | uniform(lo,hi) | zero")
    p.add_argument("--fields", default="zero")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="minimize an instance")
    p.add_argument("--algo", choices=["exact", "ptas", "witness"], required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--out-assignment")
    p.add_argument("--report")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bounds", help="witness energies and bound levels")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="recompute energy from an assignment")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--assignment", required=True)
    p.add_argument("--report", help="also cross-check a solve report's "
                                    "energy and claims")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="CSV benchmark over (r, epsilon, seed)")
    p.add_argument("--r-list", required=True)
    p.add_argument("--epsilon-list", required=True)
    p.add_argument("--seeds", type=int, required=True)
    p.add_argument("--csv", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
