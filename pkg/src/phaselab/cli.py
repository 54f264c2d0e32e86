"""Command-line entry point.

Every subcommand prints exactly one JSON document (or a CSV stream for
``census --format csv``) on stdout.  Exit codes: 0 success, 1 computation
failure or negative ``orbit`` / ``selftest`` outcome, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .core import DEFAULT_TOL, PhaseLabError, SupportSet, Tolerances, array_to_json, as_signal, signal_to_json

SCHEMA = "phaselab/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# Input helpers -------------------------------------------------------------


def _read_text(path: str) -> str:
    if not os.path.isfile(path):
        raise UsageError(f"input file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _json_arg(value: str):
    """Inline JSON (starting with ``[`` or ``{``) or a path to a JSON file."""
    text = value.strip()
    if not text.startswith(("[", "{")):
        text = _read_text(value)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from None


def _signal_arg(value: str) -> np.ndarray:
    data = _json_arg(value)
    if isinstance(data, dict):
        data = data.get("signal")
    try:
        return as_signal(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid signal: {exc}") from None


def _matrix_arg(value: str) -> np.ndarray:
    """Row-major matrix from CSV or JSON (file or inline JSON)."""
    text = value.strip()
    if text.startswith("[") or value.lower().endswith(".json"):
        rows = _json_arg(value)
    else:
        rows = [r for r in csv.reader(io.StringIO(_read_text(value))) if any(c.strip() for c in r)]
    try:
        parsed = [[complex(str(c).replace(" ", "").replace("i", "j")) if isinstance(c, str) else c for c in r] for r in rows]
        A = np.array(parsed)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid matrix: {exc}") from None
    if A.ndim != 2:
        raise UsageError("matrix must be rectangular")
    if np.iscomplexobj(A) and np.all(A.imag == 0):
        A = A.real
    if np.issubdtype(A.dtype, np.floating) and np.all(A == np.round(A)):
        A = A.astype(np.int64)
    return A


def _int_list(value: str) -> list[int]:
    try:
        return [int(v) for v in value.replace(" ", "").split(",") if v]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {value!r}") from None


def _support(values: str, N: int | None) -> SupportSet:
    if N is None:
        raise UsageError("--N is required with --S")
    try:
        return SupportSet.of(_int_list(values), N)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _tolerances(args) -> Tolerances:
    try:
        return Tolerances(
            eq_tol=args.eq_tol if args.eq_tol is not None else DEFAULT_TOL.eq_tol,
            rank_tol=args.rank_tol if args.rank_tol is not None else DEFAULT_TOL.rank_tol,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} requires {', '.join(missing)}")


# Subcommands ---------------------------------------------------------------


def cmd_measure(args) -> tuple[int, dict]:
    from . import measure as m

    _need(args, "input")
    x = _signal_arg(args.input)
    model = args.model
    if model == "linear":
        _need(args, "matrix")
        out = m.phaseless_linear(_matrix_arg(args.matrix), x)
        result = [float(v) for v in out]
    elif model == "pac":
        result = signal_to_json(m.periodic_autocorr(x))
    elif model == "apac":
        result = signal_to_json(m.aperiodic_autocorr(x))
    elif model == "intensity":
        _need(args, "theta")
        thetas = [float(t) for t in args.theta.split(",")]
        result = [m.fourier_intensity(x, t) for t in thetas]
    elif model in ("stft", "blindstft"):
        _need(args, "window", "L")
        cfg = m.StftConfig(_signal_arg(args.window), x.size, args.L)
        Y = m.stft_phaseless(x, cfg) if model == "stft" else m.blind_stft(x, cfg.window, cfg)
        result = array_to_json(Y)
    elif model == "gabor":
        _need(args, "window")
        result = [float(v) for v in m.gabor_measurements(_signal_arg(args.window), x)]
    elif model == "frog":
        _need(args, "L")
        result = array_to_json(m.frog(x, args.L, periodic=args.periodic))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown model {model}")
    return 0, {"model": model, "values": result}


def cmd_orbit(args) -> tuple[int, dict]:
    from .symmetry import orbit_equivalent

    _need(args, "x", "y")
    tol = args.tol if args.tol is not None else _tolerances(args).eq_tol
    try:
        eq = orbit_equivalent(_signal_arg(args.x), _signal_arg(args.y), args.group, tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    body = {
        "group": args.group,
        "equivalent": eq.equivalent,
        "witness": eq.witness.to_json() if eq.witness is not None else None,
        "distance": eq.distance if np.isfinite(eq.distance) else None,
        "tol": tol,
    }
    return (0 if eq.equivalent else 1), body


def cmd_ambiguities(args) -> tuple[int, dict]:
    from .ambiguity import enumerate_ambiguities

    _need(args, "input")
    res = enumerate_ambiguities(_signal_arg(args.input), tol=args.tol, max_classes=args.max_classes)
    return 0, {
        "num_classes": len(res.representatives),
        "representatives": [signal_to_json(r, force_complex=True) for r in res.representatives],
        "subsets": [list(s) for s in res.subsets],
        "roots": signal_to_json(np.asarray(res.roots.roots, dtype=complex), force_complex=True),
        "degenerate": res.degenerate,
        "reasons": res.reasons,
        "truncated": res.truncated,
    }


def cmd_diffset(args) -> tuple[int, dict]:
    from .combinat import difference_multiset, difference_set_size, dihedral_canonical
    from .symmetry import stabilizer_order

    _need(args, "S", "N")
    S = _support(args.S, args.N)
    ms = difference_multiset(S)
    return 0, {
        "S": list(S.indices),
        "N": S.N,
        "multiset": list(ms.counts),
        "display": str(ms),
        "set_size": difference_set_size(S),
        "canonical": list(dihedral_canonical(S).indices),
        "stabilizer_order": stabilizer_order(S),
    }


def cmd_census(args) -> tuple[int, dict]:
    from .combinat import collision_census

    _need(args, "N", "K")
    rep = collision_census(args.N, args.K, args.max_classes)
    return (0 if rep.complete else 1), rep.to_json()


def census_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "K", "multiset", "num_sets", "sets"])
    for ms, members in report.collision_groups:
        w.writerow([
            report.N,
            report.K,
            " ".join(str(c) for c in ms.counts),
            len(members),
            ";".join(" ".join(str(i) for i in S.indices) for S in members),
        ])
    return buf.getvalue()


def cmd_complement(args) -> tuple[int, dict]:
    from .combinat import complement_property

    _need(args, "matrix")
    A = _matrix_arg(args.matrix)
    res = complement_property(A, max_rows=args.max_rows, rank_tol=_tolerances(args).rank_tol)
    return 0, {"shape": list(A.shape), **res.to_json()}


def cmd_conjecture(args) -> tuple[int, dict]:
    from .algebra.incidence import (
        check_signal_conjecture,
        check_support_conjecture,
        check_support_pair,
        signal_sweep,
    )

    _need(args, "N")
    if args.mode == "signal":
        if args.S is not None:
            rep = check_signal_conjecture(_support(args.S, args.N), max_pairs=args.max_pairs)
            body = rep.to_json()
            if rep.skipped and rep.skipped.startswith("budget"):
                return 1, {"result": body, "error": {"type": "budget", "message": rep.skipped}}
            return 0, body
        _need(args, "K")
        sweep = signal_sweep(args.N, args.K, args.max_pairs, args.workers, args.budget)
    else:
        if args.S is not None:
            _need(args, "S2")
            rep = check_support_pair(_support(args.S, args.N), _support(args.S2, args.N), args.max_pairs)
            body = rep.to_json()
            if rep.skipped:
                return 1, {"result": body, "error": {"type": "budget", "message": rep.skipped}}
            return 0, body
        _need(args, "K")
        sweep = check_support_conjecture(args.N, args.K, args.max_pairs, args.workers, args.budget,
                                         strict=args.strict)
    body = sweep.to_json()
    if not sweep.complete:
        return 1, {"result": body, "error": {"type": "budget", "message": sweep.reason}}
    return 0, body


def cmd_probe(args) -> tuple[int, dict]:
    from .measure import StftConfig
    from .numerics import ResidualMap, collision_search

    rng = np.random.default_rng(args.seed)
    if args.input is not None:
        x = _signal_arg(args.input)
    else:
        _need(args, "N")
        x = rng.standard_normal(args.N)
        if args.model != "linear":
            x = x + 1j * rng.standard_normal(args.N)
    group = args.group
    if args.model == "linear":
        _need(args, "matrix")
        A = _matrix_arg(args.matrix)
        fmap = ResidualMap.linear(A, x_ref=x)
        group = group or ("sign" if fmap.field_tag == "real" else "phase")
    elif args.model == "stft":
        _need(args, "window", "L")
        fmap = ResidualMap.stft(StftConfig(_signal_arg(args.window), x.size, args.L), x_ref=x)
    elif args.model == "gabor":
        w = _signal_arg(args.window) if args.window else rng.standard_normal(x.size) + 1j * rng.standard_normal(x.size)
        fmap = ResidualMap.gabor(w, x_ref=x)
    else:
        _need(args, "L")
        fmap = ResidualMap.frog(x.size, args.L, x_ref=x, periodic=args.periodic)
    group = group or "phase"
    rep = collision_search(fmap, x, group, restarts=args.restarts, seed=args.seed)
    return 0, {"model": args.model, "x_ref": signal_to_json(x), "report": rep.to_json()}


def cmd_selftest(args) -> tuple[int, dict]:
    from .selftest import run_selftest

    rep = run_selftest(_tolerances(args), include_slow=not args.fast)
    return (0 if rep.passed else 1), rep.to_json()


COMMANDS = {
    "measure": cmd_measure,
    "orbit": cmd_orbit,
    "ambiguities": cmd_ambiguities,
    "diffset": cmd_diffset,
    "census": cmd_census,
    "complement": cmd_complement,
    "conjecture": cmd_conjecture,
    "probe": cmd_probe,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--out", help="also write the output document to this path")
    common.add_argument("--eq-tol", type=float, dest="eq_tol")
    common.add_argument("--rank-tol", type=float, dest="rank_tol")

    p = _Parser(prog="phaselab", description="Phase retrieval toolkit")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("measure", parents=[common], help="evaluate a measurement model")
    s.add_argument("--model", required=True, choices=["linear", "pac", "apac", "intensity", "stft", "blindstft", "gabor", "frog"])
    s.add_argument("--input", help="signal: JSON file or inline JSON")
    s.add_argument("--matrix", help="CSV or JSON matrix (linear)")
    s.add_argument("--window", help="window signal (stft, blindstft, gabor)")
    s.add_argument("--L", type=int, help="hop / FROG step")
    s.add_argument("--theta", help="comma-separated angles (intensity)")
    s.add_argument("--periodic", action="store_true", help="cyclic FROG translates")

    s = sub.add_parser("orbit", parents=[common], help="test orbit equivalence of two signals")
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--group", default="phase")
    s.add_argument("--tol", type=float)

    s = sub.add_parser("ambiguities", parents=[common], help="enumerate root-flip ambiguities")
    s.add_argument("--input", required=True)
    s.add_argument("--max-classes", type=int, dest="max_classes")
    s.add_argument("--tol", type=float, default=1e-7)

    s = sub.add_parser("diffset", parents=[common], help="difference multiset of one support")
    s.add_argument("--S", required=True)
    s.add_argument("--N", type=int, required=True)

    s = sub.add_parser("census", parents=[common], help="difference-multiset collisions")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--max-classes", type=int, dest="max_classes")
    s.add_argument("--format", choices=["json", "csv"], default="json")

    s = sub.add_parser("complement", parents=[common], help="complement property of a real matrix")
    s.add_argument("--matrix", required=True)
    s.add_argument("--max-rows", type=int, default=24, dest="max_rows")

    s = sub.add_parser("conjecture", parents=[common], help="incidence-ideal recovery checks")
    s.add_argument("--mode", choices=["support", "signal"], required=True)
    s.add_argument("--N", type=int)
    s.add_argument("--K", type=int)
    s.add_argument("--S")
    s.add_argument("--S2", help="second support (support mode, single pair)")
    s.add_argument("--budget", type=float, help="time budget in ms (overrides PHASELAB_BUDGET_MS)")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--max-pairs", type=int, default=100_000, dest="max_pairs", help="S-pair cap per ideal")
    s.add_argument("--strict", action="store_true", help="support mode: only pairs with |S-S| > K")

    s = sub.add_parser("probe", parents=[common], help="local collision search")
    s.add_argument("--model", choices=["linear", "stft", "gabor", "frog"], default="linear")
    s.add_argument("--matrix")
    s.add_argument("--input", help="reference signal; random from --seed when omitted")
    s.add_argument("--N", type=int)
    s.add_argument("--window")
    s.add_argument("--L", type=int)
    s.add_argument("--periodic", action="store_true")
    s.add_argument("--group")
    s.add_argument("--restarts", type=int, default=200)

    s = sub.add_parser("selftest", parents=[common], help="run the worked-example regression suite")
    s.add_argument("--fast", action="store_true", help="skip the optimisation-based checks")
    return p


def _emit(text: str, out: str | None) -> None:
    sys.stdout.write(text)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.command == "census" and args.format == "csv":
            from .combinat import collision_census

            rep = collision_census(args.N, args.K, args.max_classes)
            _emit(census_csv(rep), args.out)
            return 0 if rep.complete else 1
        code, body = COMMANDS[args.command](args)
        doc = {"schema": SCHEMA, "command": args.command, "seed": args.seed, "result": body}
        if isinstance(body, dict) and "error" in body and "result" in body:
            doc["result"] = body["result"]
            doc["error"] = body["error"]
        _emit(_dump(doc), args.out)
        return code
    except UsageError as exc:
        print(f"phaselab: usage error: {exc}", file=sys.stderr)
        seed = getattr(args, "seed", None)
        sys.stdout.write(_dump({"schema": SCHEMA, "seed": seed, "error": {"type": "usage", "message": str(exc)}}))
        return 2
    except (PhaseLabError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"phaselab: {type(exc).__name__}: {exc}", file=sys.stderr)
        doc = {
            "schema": SCHEMA,
            "command": args.command,
            "seed": args.seed,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        sys.stdout.write(_dump(doc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
