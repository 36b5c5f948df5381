"""Batch command line: verify, reproduce, explore, operator, selfdual.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 internal
arithmetic error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .bethe import (
    BetheTuple,
    NoPolynomialSolution,
    NotAdmissible,
    NotFertile,
    NotGeneric,
    ZeroDescendant,
    is_generic,
    reproduce,
    trivial_tuple,
    verify_bae,
)
from .exactalg import Polynomial, as_fraction
from .liedata import (
    Algebra,
    ExtParity,
    InvalidMove,
    WeightData,
    coords_at,
    hook_weights,
    parity_step,
    path_to,
    standard_parity,
    weight_step,
)
from .orepdo import RatPDO, frac_to_json
from .population import (
    DEFAULT_C_SAMPLES,
    explore,
    graph_summary,
    invariance_check,
    operator_R,
)
from .serialize import ParseError, parse_rational_function, poly_from_json
from .superspace import NonRationalKernel, selfdual_report, superkernel

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_ARITH = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class Problem:
    parity: ExtParity
    weights: WeightData
    depth: int = 2
    c_samples: tuple = DEFAULT_C_SAMPLES


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _parity_from(algebra: Algebra, data: dict, key: str = "parity", kappa_key: str = "kappa") -> ExtParity:
    kappa = int(data.get(kappa_key, 1))
    if data.get(key) is None:
        return standard_parity(algebra, 1) if kappa == 1 else _flip(standard_parity(algebra))
    return ExtParity(algebra, tuple(int(v) for v in data[key]), kappa)


def _flip(p: ExtParity) -> ExtParity:
    return parity_step(p, "f")


def _transport(coords: tuple, source: ExtParity, target: ExtParity) -> tuple:
    """Coordinates at ``source`` moved to ``target`` through the standard parity."""
    std = standard_parity(source.algebra)
    moves = (["f"] if source.kappa == -1 else []) + path_to(source)
    walk = [std]
    for mv in moves:
        walk.append(parity_step(walk[-1], mv))
    # each primitive move is an involution, so stepping back undoes it
    for mv, p in zip(reversed(moves), reversed(walk[1:])):
        coords = weight_step(coords, p, mv)
    return coords_at(coords, target)


def load_problem(data) -> Problem:
    if not isinstance(data, dict):
        raise InputError("problem must be a JSON object")
    try:
        algebra = Algebra.parse(str(data["algebra"]), data.get("m"), data.get("n"))
        parity = _parity_from(algebra, data)
        points = tuple(as_fraction(str(z)) for z in data["points"])
        raw = data["weights"]
        if len(raw) != len(points):
            raise InputError("one weight per point is required")
        source = _parity_from(algebra, data, "coords_parity", "coords_kappa") if "coords_parity" in data else standard_parity(algebra)
        weights = []
        for w in raw:
            if isinstance(w, dict):
                coords = hook_weights([int(v) for v in w["partition"]], algebra.m, algebra.n, int(w.get("kind", 1)))
                coords = coords_at(coords, parity)
            else:
                coords = _transport(tuple(as_fraction(str(v)) for v in w), source, parity)
            weights.append(coords)
        depth = int(data.get("depth", 2))
        c_samples = tuple(as_fraction(str(c)) for c in data.get("c_samples", DEFAULT_C_SAMPLES))
        return Problem(parity, WeightData(tuple(weights), points, parity), depth, c_samples)
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"invalid problem: {exc!r}") from exc


def _poly(item) -> Polynomial:
    if isinstance(item, list):
        return poly_from_json(item)
    f = parse_rational_function(str(item))
    if not f.is_polynomial():
        raise InputError(f"{item!r} is not a polynomial")
    return f.as_polynomial()


def load_tuple(data, problem: Problem) -> BetheTuple:
    """Tuple JSON: ``{"y": [...], "parity": [...], "kappa": k}``; parity defaults to the problem's."""
    if data is None:
        return trivial_tuple(problem.parity, problem.weights)
    if not isinstance(data, dict) or "y" not in data:
        raise InputError("tuple must be an object with a 'y' list")
    try:
        algebra = problem.parity.algebra
        parity = _parity_from(algebra, data) if "parity" in data else problem.parity
        weights = problem.weights
        if parity != problem.parity:
            coords = tuple(_transport(w, problem.parity, parity) for w in weights.weights)
            weights = WeightData(coords, weights.points, parity)
        return BetheTuple(tuple(_poly(p) for p in data["y"]), parity, weights)
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, ParseError) as exc:
        raise InputError(f"invalid tuple: {exc!r}") from exc


def _parse_move(text: str):
    if text == "f":
        return "f"
    try:
        return int(text)
    except ValueError as exc:
        raise InputError(f"move must be an integer or 'f', got {text!r}") from exc


def _emit(payload, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


# -- commands ----------------------------------------------------------------------------

def cmd_verify(args) -> int:
    problem = load_problem(_read_json(args.problem))
    t = load_tuple(_read_json(args.tuple) if args.tuple else None, problem)
    try:
        report = verify_bae(t.y, t.data)
    except NotGeneric as exc:
        _emit({"ok": False, "reason": f"not generic: {exc}"}, args.out)
        return EXIT_FAIL
    except NotAdmissible as exc:
        _emit({"ok": False, "reason": f"not admissible: {exc}"}, args.out)
        return EXIT_FAIL
    payload = report.to_json()
    payload["failing"] = report.failing
    _emit(payload, args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_reproduce(args) -> int:
    problem = load_problem(_read_json(args.problem))
    t = load_tuple(_read_json(args.tuple) if args.tuple else None, problem)
    move = _parse_move(args.move)
    if move not in t.parity.moves():
        raise InputError(f"move {move} is not available at parity {t.parity.label()}")
    c = as_fraction(args.c) if args.c is not None else Fraction(0)
    try:
        child = reproduce(t, move, c)
    except (NoPolynomialSolution, NotFertile, ZeroDescendant) as exc:
        _emit({"ok": False, "reason": f"{type(exc).__name__}: {exc}"}, args.out)
        return EXIT_FAIL
    payload = {
        "ok": True,
        "move": str(move),
        "c": str(c),
        "tuple": child.to_json(),
        "weights": [[str(v) for v in w] for w in child.weights.weights],
        "generic": bool(is_generic(child.y, child.data)),
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_explore(args) -> int:
    problem = load_problem(_read_json(args.problem))
    seed = load_tuple(_read_json(args.tuple) if args.tuple else None, problem)
    depth = args.depth if args.depth is not None else problem.depth
    c_samples = tuple(as_fraction(c) for c in args.c) if args.c else problem.c_samples
    graph = explore(seed, depth, c_samples, rng_seed=args.seed)
    inv = invariance_check(graph)
    summary = {"graph": graph_summary(graph), "invariance": inv.to_json()}
    try:
        space = superkernel(operator_R(seed))
        summary["selfdual"] = selfdual_report(space)
        summary["superkernel"] = space.to_json()
    except NonRationalKernel as exc:
        summary["selfdual"] = {"ok": None, "reason": f"kernel not rational: {exc}"}
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "graph.json").write_text(json.dumps(graph.to_json(), indent=2, sort_keys=True) + "\n")
        (out / "graph.dot").write_text(graph.to_dot() + "\n")
        (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    else:
        summary["graph_json"] = graph.to_json()
        summary["dot"] = graph.to_dot()
    print(json.dumps(summary, indent=2, sort_keys=True))
    unverified = [k for k, n in enumerate(graph.nodes) if n.generic and n.verified is False]
    return EXIT_OK if inv.ok and not unverified else EXIT_FAIL


def cmd_operator(args) -> int:
    problem = load_problem(_read_json(args.problem))
    t = load_tuple(_read_json(args.tuple) if args.tuple else None, problem)
    r = operator_R(t)
    payload = frac_to_json(r)
    reduced = r.reduced()
    payload["reduced"] = {"num": reduced.num.to_strings(), "den": reduced.den.to_strings()}
    payload["orders"] = [reduced.num.order, reduced.den.order]
    _emit(payload, args.out)
    return EXIT_OK


def load_operator(data) -> RatPDO:
    if not isinstance(data, dict) or "chain" not in data:
        raise InputError("operator JSON needs a 'chain' list of [f, s] pairs")
    try:
        chain = [(parse_rational_function(str(f)), int(s)) for f, s in data["chain"]]
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid chain: {exc!r}") from exc
    if any(s not in (1, -1) for _, s in chain):
        raise InputError("chain exponents must be +1 or -1")
    return RatPDO.from_chain(chain)


def cmd_selfdual(args) -> int:
    r = load_operator(_read_json(args.operator))
    try:
        space = superkernel(r)
    except NonRationalKernel as exc:
        _emit({"ok": False, "reason": f"kernel not rational: {exc}"}, args.out)
        return EXIT_FAIL
    report = selfdual_report(space)
    report["superkernel"] = space.to_json()
    _emit(report, args.out)
    return EXIT_OK if report["ok"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ospbethe", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0, help="seed for the c-sample retries")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a tuple against its Bethe ansatz equations")
    p.add_argument("problem")
    p.add_argument("tuple", nargs="?", help="tuple JSON (default: all-ones tuple)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reproduce", help="apply one reproduction move")
    p.add_argument("problem")
    p.add_argument("tuple", nargs="?")
    p.add_argument("--move", required=True, help="direction index or 'f'")
    p.add_argument("--c", default=None, help="bosonic family parameter")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("explore", help="explore the population to a bounded depth")
    p.add_argument("problem")
    p.add_argument("tuple", nargs="?")
    p.add_argument("--depth", type=int)
    p.add_argument("--c", nargs="+", help="bosonic family samples")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("operator", help="invariant pseudo-differential operator of a tuple")
    p.add_argument("problem")
    p.add_argument("tuple", nargs="?")
    p.add_argument("--out")
    p.set_defaults(func=cmd_operator)

    p = sub.add_parser("selfdual", help="self-duality report for an operator JSON")
    p.add_argument("operator")
    p.add_argument("--out")
    p.set_defaults(func=cmd_selfdual)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, ParseError, InvalidMove) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, AssertionError) as exc:
        print(f"arithmetic error in '{args.command}': {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ARITH


if __name__ == "__main__":
    sys.exit(main())
