"""Command-line surface: state I/O, measure evaluation, reproduction suites.

Subcommands
-----------
``eval``    evaluate a measure on a state file (mixed states go through the
            convex roof automatically)
``sweep``   write figure-data CSV files for the two named state families
``verify``  run the reproduction / conditions / property-scan / local-
            operation suites and emit JSON (or JSONL) reports

Exit codes: 0 success, 1 hard-expectation failure in ``verify``, 2 invalid
input, 3 size guard exceeded.  All randomized commands are deterministic
given ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import locc, measures, qstate, redfun, verify
from .convexroof import convex_roof
from .errors import GuardError, PartitionError, StateError
from .measures import Family, MeasureSpec, measure_pure
from .partitions import Partition, full_partition, parse_partition
from .qstate import DensityOperator, PureState
from .redfun import HKind, ProbeProperty, ReducedFunctionSpec, property_probe, table_entry

LN2 = math.log(2.0)

EXIT_OK = 0
EXIT_EXPECTATION = 1
EXIT_INVALID = 2
EXIT_GUARD = 3


def worker_count() -> int:
    """Worker cap from ENTMONO_THREADS (default 1; sweeps are sequential)."""
    try:
        return max(1, int(os.environ.get("ENTMONO_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# State files
# ---------------------------------------------------------------------------

def state_to_json(state: PureState | DensityOperator) -> dict:
    doc = {"labels": list(state.labels), "dims": list(state.dims)}
    if isinstance(state, PureState):
        doc["kind"] = "pure"
        doc["amplitudes"] = [[float(z.real), float(z.imag)] for z in state.amplitudes]
    else:
        doc["kind"] = "mixed"
        doc["matrix"] = [[[float(z.real), float(z.imag)] for z in row] for row in state.matrix]
    return doc


def state_from_json(doc: dict) -> PureState | DensityOperator:
    try:
        labels = [str(x) for x in doc["labels"]]
        dims = [int(x) for x in doc["dims"]]
        kind = doc["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise StateError(f"malformed state document: {exc}") from exc
    if kind == "pure":
        amps = np.array([complex(re, im) for re, im in doc["amplitudes"]])
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > 1e-9:
            raise StateError(f"state file not normalized: sum |a|^2 = {norm2!r}")
        if abs(norm2 - 1.0) > 1e-12:
            amps = amps / math.sqrt(norm2)
        return PureState(labels, dims, amps)
    if kind == "mixed":
        mat = np.array([[complex(re, im) for re, im in row] for row in doc["matrix"]])
        return DensityOperator(labels, dims, mat)
    raise StateError(f"unknown state kind {kind!r}")


def canonical_state_text(state: PureState | DensityOperator) -> str:
    """Serialized form that round-trips byte-identically."""
    return json.dumps(state_to_json(state), indent=2, sort_keys=True) + "\n"


def load_state(path: str) -> PureState | DensityOperator:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_json(json.load(fh))


def save_state(path: str, state: PureState | DensityOperator) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_state_text(state))


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

_ENTROPIC = {HKind.ENTROPY, HKind.RENYI}


def _roof_opts(args) -> dict:
    opts = {}
    if args.roof_m is not None:
        opts["m"] = args.roof_m
    if args.restarts is not None:
        opts["restarts"] = args.restarts
    if args.tol is not None:
        opts["tol"] = args.tol
    return opts


def cmd_eval(args) -> int:
    state = load_state(args.state)
    spec = MeasureSpec(Family(args.measure), ReducedFunctionSpec.parse(args.h))
    partition = (parse_partition(args.partition, state.labels)
                 if args.partition else full_partition(state.labels))

    roof_info = None
    mixed = isinstance(state, DensityOperator)
    if not mixed:
        try:
            value = measure_pure(spec, state, partition)
        except StateError:
            mixed = True
            state = qstate.projector(state)
    if mixed:
        res = convex_roof(spec, state, partition, seed=args.seed, **_roof_opts(args))
        value = res.value
        roof_info = {
            "upper_bound": res.value,
            "spread": res.spread,
            "restarts_used": res.restarts_used,
            "converged": res.converged,
        }

    if args.bits and spec.h.kind in _ENTROPIC:
        value = value / LN2

    out = {
        "value": value,
        "family": spec.family.value,
        "h": spec.h.name,
        "partition": str(partition),
        "roof": roof_info,
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

_SWEEP_H = (
    ("concurrence", ReducedFunctionSpec(HKind.CONCURRENCE)),
    ("fidelityFprime", ReducedFunctionSpec(HKind.FIDELITY_F_PRIME)),
    ("pnorm2", ReducedFunctionSpec(HKind.PNORM2)),
)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def cmd_sweep(args) -> int:
    if args.points < 2:
        raise StateError("--points must be >= 2")
    os.makedirs(args.out, exist_ok=True)

    if args.figure == "fig1":
        path = os.path.join(args.out, "fig1.csv")
        header = ["t"]
        for name, _ in _SWEEP_H:
            header += [f"gsum_{name}", f"gmax_{name}"]
        rows = []
        for t in np.linspace(0.0, 1.0, args.points):
            st = verify.make_ghz_class(float(t))
            row = [float(t)]
            for _, h in _SWEEP_H:
                row.append(measure_pure(MeasureSpec(Family.GSUM, h), st))
                row.append(measure_pure(MeasureSpec(Family.GMAX, h), st))
            rows.append(row)
    else:
        path = os.path.join(args.out, "fig2.csv")
        header = ["p", "q", "r"]
        for name, _ in _SWEEP_H:
            header += [f"gsum_{name}", f"gmax_{name}", f"gmin_{name}"]
        rows = []
        grid = np.linspace(0.0, 1.0, args.points + 2)[1:-1]
        for p in grid:
            for q in grid:
                r = 1.0 - p - q
                if not (p >= q >= r > 1e-9):
                    continue
                st = verify.make_w_class(float(p), float(q))
                row = [float(p), float(q), float(r)]
                for _, h in _SWEEP_H:
                    row.append(measure_pure(MeasureSpec(Family.GSUM, h), st))
                    row.append(measure_pure(MeasureSpec(Family.GMAX, h), st))
                    row.append(measure_pure(MeasureSpec(Family.GMIN, h), st))
                rows.append(row)

    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")
    sys.stdout.write(path + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------

_SCAN_KINDS: tuple[ReducedFunctionSpec, ...] = (
    ReducedFunctionSpec(HKind.ENTROPY),
    ReducedFunctionSpec(HKind.CONCURRENCE),
    ReducedFunctionSpec(HKind.TANGLE),
    ReducedFunctionSpec(HKind.TSALLIS, 2.0),
    ReducedFunctionSpec(HKind.TSALLIS, 0.5),
    ReducedFunctionSpec(HKind.RENYI, 0.5),
    ReducedFunctionSpec(HKind.NEGATIVITY),
    ReducedFunctionSpec(HKind.FIDELITY_F),
    ReducedFunctionSpec(HKind.FIDELITY_F_PRIME),
    ReducedFunctionSpec(HKind.FIDELITY_AF),
    ReducedFunctionSpec(HKind.PNORM2),
    ReducedFunctionSpec(HKind.PNORM_MIN),
    ReducedFunctionSpec(HKind.PNORM_MIN_PRIME),
    ReducedFunctionSpec(HKind.PNEGATIVITY),
    ReducedFunctionSpec(HKind.TSALLIS_PRIME, 2.0),
    ReducedFunctionSpec(HKind.RENYI_PRIME, 0.5),
)

#: Subadditivity holds with a proof for exactly these kinds.
PROVEN_SUBADDITIVE = ("entropy", "concurrence", "tangle", "tsallis:2", "fidelityF", "pnorm2")


def _suite_reproduce(args, report) -> bool:
    names = [args.case] if args.case else list(verify.CASES)
    ok = True
    for name in names:
        rep = verify.reproduce_case(name, seed=args.seed)
        report(rep)
        ok = ok and rep["pass"]
    return ok


def _suite_conditions(args, report) -> bool:
    ok = True
    for case in verify.CONDITION_CASES:
        if args.measure and case.family.value != args.measure:
            continue
        if args.h and case.h.value != args.h:
            continue
        if args.case and case.state != args.case:
            continue
        rep = verify.run_condition_case(case, seed=args.seed)
        matched = case.matches(rep)
        doc = rep.to_dict()
        doc["expected"] = case.expected
        doc["provenance"] = case.provenance
        doc["matched"] = matched
        report(doc)
        if case.provenance != "conjectured" and not matched:
            ok = False
    return ok


def _suite_scan(args, report) -> bool:
    ok = True
    kinds = [ReducedFunctionSpec.parse(args.h)] if args.h else list(_SCAN_KINDS)
    props = ([ProbeProperty(args.property)] if args.property
             else [ProbeProperty.CONCAVITY, ProbeProperty.SUBADDITIVITY])
    trials = args.trials or 300
    for spec in kinds:
        pattern = table_entry(spec)
        for prop in props:
            if prop in (ProbeProperty.SUBADDITIVITY, ProbeProperty.ADDITIVITY):
                dims = (2, 2)
            else:
                dims = (3,)
            rep = property_probe(spec, prop, trials, seed=args.seed, dims=dims)
            doc = rep.to_dict()
            expected = pattern[{
                ProbeProperty.CONCAVITY: "concave",
                ProbeProperty.STRICT_CONCAVITY: "strictly_concave",
                ProbeProperty.SUBADDITIVITY: "subadditive",
                ProbeProperty.ADDITIVITY: "additive",
            }[prop]]
            doc["documented"] = expected
            hard = expected is True and not (
                prop is ProbeProperty.SUBADDITIVITY and spec.name not in PROVEN_SUBADDITIVE
            )
            if prop is ProbeProperty.CONCAVITY and spec.kind is HKind.PNEGATIVITY:
                hard = False
            doc["hard"] = hard
            report(doc)
            if hard and rep.violations > 0:
                ok = False
    return ok


def _suite_locc(args, report) -> bool:
    ok = True
    trials = args.trials or 200
    fam = Family(args.measure) if args.measure else Family.SUM
    h = ReducedFunctionSpec.parse(args.h) if args.h else ReducedFunctionSpec(HKind.TANGLE)
    spec = MeasureSpec(fam, h)
    hard = fam in (Family.SUM, Family.GSUM, Family.SUM_BIPART, Family.GSUM_BIPART)
    rng = np.random.SeedSequence(args.seed).spawn(trials)

    def one_trial(i: int):
        r = np.random.default_rng(rng[i])
        state = qstate.random_pure_state((2, 2, 2), int(r.integers(0, 2**62)))
        party = state.labels[int(r.integers(0, 3))]
        inst = locc.random_local_instrument(2, int(r.integers(2, 5)),
                                            int(r.integers(0, 2**62)), party=party)
        return locc.monotonicity_trial(spec, state, inst)

    workers = worker_count()
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one_trial, range(trials)))
    else:
        records = [one_trial(i) for i in range(trials)]

    violations = 0
    worst = -np.inf
    for i, rec in enumerate(records):
        worst = max(worst, rec.delta)
        if rec.delta > 1e-9:
            violations += 1
            report({"trial": i, **rec.to_dict(), "violation": True})
    report({
        "family": fam.value, "h": h.name, "trials": trials,
        "violations": violations, "worst_delta": worst, "hard": hard,
    })
    if hard and violations:
        ok = False
    return ok


def cmd_verify(args) -> int:
    lines: list[dict] = []

    def report(doc: dict) -> None:
        lines.append(doc)

    suites = {
        "reproduce": _suite_reproduce,
        "conditions": _suite_conditions,
        "scan": _suite_scan,
        "locc": _suite_locc,
    }
    ok = suites[args.suite](args, report)
    if args.jsonl:
        for doc in lines:
            sys.stdout.write(json.dumps(doc) + "\n")
    else:
        json.dump({"suite": args.suite, "pass": ok, "reports": lines}, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return EXIT_OK if ok else EXIT_EXPECTATION


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entmono",
        description="Multipartite entanglement monotones on explicit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a measure on a state file")
    p_eval.add_argument("--state", required=True, help="JSON state file")
    p_eval.add_argument("--measure", required=True, choices=[f.value for f in Family])
    p_eval.add_argument("--h", required=True, help="reduced function, e.g. tangle or tsallis:2")
    p_eval.add_argument("--partition", default=None, help='e.g. "AB|C|D" (default: all singletons)')
    p_eval.add_argument("--bits", action="store_true",
                        help="report entropy-based values in bits instead of nats")
    p_eval.add_argument("--roof-m", type=int, default=None, help="roof ensemble cardinality")
    p_eval.add_argument("--restarts", type=int, default=None, help="roof optimizer restarts")
    p_eval.add_argument("--tol", type=float, default=None, help="roof stagnation tolerance")
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.set_defaults(fn=cmd_eval)

    p_sweep = sub.add_parser("sweep", help="write figure-data CSV files")
    p_sweep.add_argument("--figure", required=True, choices=["fig1", "fig2"])
    p_sweep.add_argument("--points", type=int, default=21)
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.set_defaults(fn=cmd_sweep)

    p_ver = sub.add_parser("verify", help="run reproduction and verification suites")
    p_ver.add_argument("--suite", required=True,
                       choices=["reproduce", "conditions", "scan", "locc"])
    p_ver.add_argument("--case", default=None, help="restrict to one named case")
    p_ver.add_argument("--measure", default=None, help="restrict to one measure family")
    p_ver.add_argument("--h", default=None, help="restrict to one reduced function")
    p_ver.add_argument("--property", default=None,
                       choices=[p.value for p in ProbeProperty])
    p_ver.add_argument("--trials", type=int, default=None)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--jsonl", action="store_true", help="stream one JSON object per line")
    p_ver.set_defaults(fn=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (StateError, PartitionError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
