"""Bounded exploration of reproduction graphs and the invariant pseudo-differential operator."""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .bethe import (
    BetheTuple,
    NoPolynomialSolution,
    NotFertile,
    ZeroDescendant,
    bosonic_step,
    is_generic,
    move_kind,
    reproduce,
    trivial_tuple,
    verify_bae,
    verify_tuple,
)
from .exactalg import ONE, Polynomial, as_fraction, log_derivative
from .liedata import (
    GL,
    OSP_ODD,
    ExtParity,
    WeightData,
    a_typical,
    lift_coords,
    lift_parity,
    p_sequence,
)
from .orepdo import RatPDO, chain_to_json, frac_ratio, frac_to_json, symmetry_sign

DEFAULT_C_SAMPLES = (0, 1, -1, 2)
RETRY_BUDGET = 8


def seed_trivial(parity: ExtParity, weights: WeightData) -> BetheTuple:
    """The tuple with every ``y_i = 1``."""
    t = trivial_tuple(parity, weights)
    if not verify_tuple(t).ok:
        raise ArithmeticError("the trivial tuple failed verification")
    return t


# -- lifts to gl -------------------------------------------------------------------

def lifted_y(t: BetheTuple) -> tuple:
    """The gl-side sequence of polynomials attached to an osp tuple."""
    y, p = t.y, t.parity
    kind = p.algebra.kind
    if kind == GL:
        return y
    if kind == OSP_ODD:
        return y + tuple(reversed(y[:-1]))
    r = p.r
    if r == 1:
        # single root: only the middle block survives
        return (y[0] ** 2, y[0] ** 2)
    head = y[: r - 2]
    if p.type_d:
        # same shape for both kappa, in the tuple's own labels
        mid = (y[-2] * y[-1], y[-1] ** 2, y[-1] ** 2, y[-2] * y[-1])
    else:
        mid = (y[-2], y[-1] ** 2, y[-1] ** 2, y[-2])
    return head + mid + tuple(reversed(head))


def lifted_weights(t: BetheTuple) -> WeightData:
    p = t.parity
    if p.algebra.kind == GL:
        return t.weights
    lp = lift_parity(p)
    return WeightData(tuple(lift_coords(w, p) for w in t.weights.weights), t.weights.points, lp)


def lift_to_gl(t: BetheTuple) -> BetheTuple:
    """The gl tuple obtained by mirroring; for osp(2m|2n) it may be non-generic."""
    p = t.parity
    if p.algebra.kind == GL:
        return t
    w = lifted_weights(t)
    return BetheTuple(lifted_y(t), w.parity, w)


def unmirror(t: BetheTuple, parity: ExtParity, weights: WeightData) -> BetheTuple:
    """Inverse of the odd-orthogonal mirror lift on a mirror-symmetric gl tuple."""
    r = parity.r
    y = t.y
    if len(y) != 2 * r - 1 or any(y[k] != y[len(y) - 1 - k] for k in range(r - 1)):
        raise ValueError("tuple is not mirror symmetric")
    return BetheTuple(y[:r], parity, weights)


# -- the invariant operator ------------------------------------------------------------

def _gl_chain(y: Sequence[Polynomial], s: Sequence[int], P: Sequence) -> list:
    full = (ONE,) + tuple(y) + (ONE,)
    chain = []
    for i, si in enumerate(s):
        f = log_derivative(P[i]) + log_derivative(full[i]) - log_derivative(full[i + 1])
        chain.append((f * si, si))
    return chain


def operator_chain(t: BetheTuple) -> list:
    """Factor chain ``[(f_i, s_i)]`` of the invariant operator on the gl side."""
    p = t.parity
    if p.algebra.kind == GL:
        P = p_sequence(t.weights, p.r)
        return _gl_chain(t.y, p.s, P)
    w = lifted_weights(t)
    P = p_sequence(w, w.parity.r)
    return _gl_chain(lifted_y(t), w.parity.s, P)


def operator_R(t: BetheTuple) -> RatPDO:
    chain = operator_chain(t)
    return RatPDO.from_chain(chain)


def mirrored_half(t: BetheTuple) -> list:
    """The first half of the chain (positions before the middle)."""
    chain = operator_chain(t)
    return chain[: t.parity.r]


# -- population graph -------------------------------------------------------------------

@dataclass
class NodeInfo:
    tuple: BetheTuple
    depth: int
    generic: bool = True
    verified: Optional[bool] = None
    a_typical: Optional[bool] = None
    infertile: dict = field(default_factory=dict)
    degenerate: list = field(default_factory=list)

    @property
    def fertile(self) -> bool:
        return not self.infertile


@dataclass
class Edge:
    source: int
    target: int
    move: object
    c: Optional[Fraction]
    kind: str
    family: Optional[tuple] = None  # (canonical solution, direction polynomial)


@dataclass
class PopulationGraph:
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    index: dict = field(default_factory=dict)
    seed_value: int = 0

    def add(self, t: BetheTuple, depth: int) -> tuple:
        key = t.key
        if key in self.index:
            return self.index[key], False
        self.index[key] = len(self.nodes)
        self.nodes.append(NodeInfo(t, depth))
        return self.index[key], True

    def __len__(self):
        return len(self.nodes)

    def tuples(self) -> list:
        return [n.tuple for n in self.nodes]

    def sorted_ids(self) -> list:
        return sorted(range(len(self.nodes)), key=lambda k: _sort_key(self.nodes[k].tuple))

    def to_json(self) -> dict:
        order = self.sorted_ids()
        rename = {old: new for new, old in enumerate(order)}
        nodes = []
        for old in order:
            info = self.nodes[old]
            t = info.tuple
            nodes.append(
                {
                    "id": rename[old],
                    **t.to_json(),
                    "depth": info.depth,
                    "generic": info.generic,
                    "verified": info.verified,
                    "a_typical": info.a_typical,
                    "infertile": {str(k): v for k, v in sorted(info.infertile.items(), key=str)},
                    "degenerate": [[str(m), str(c)] for m, c in info.degenerate],
                }
            )
        edges = sorted(
            (
                {
                    "source": rename[e.source],
                    "target": rename[e.target],
                    "move": str(e.move),
                    "c": None if e.c is None else str(e.c),
                    "kind": e.kind,
                }
                for e in self.edges
            ),
            key=lambda d: (d["source"], d["target"], d["move"], d["c"] or ""),
        )
        return {"nodes": nodes, "edges": edges, "seed": self.seed_value}

    def to_dot(self) -> str:
        order = self.sorted_ids()
        rename = {old: new for new, old in enumerate(order)}
        lines = ["digraph population {"]
        for old in order:
            t = self.nodes[old].tuple
            degrees = ",".join(str(d) for d in t.degrees)
            lines.append(f'  n{rename[old]} [label="{t.parity.label()} ({degrees})"];')
        for e in sorted(self.edges, key=lambda e: (rename[e.source], rename[e.target], str(e.move), str(e.c))):
            label = str(e.move) if e.c is None else f"{e.move}/{e.c}"
            lines.append(f'  n{rename[e.source]} -> n{rename[e.target]} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)


def _sort_key(t: BetheTuple) -> tuple:
    return (
        t.parity.s,
        t.parity.kappa,
        t.degrees,
        tuple(tuple(p.coeffs) for p in t.y),
    )


def _fresh_c(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-60, 60), rng.randint(1, 9))


def _bosonic_children(t: BetheTuple, i: int, c_samples, rng):
    """Yield ``(descendant | None, c, family)`` for each requested sample."""
    g, yi = bosonic_step(t, i)
    for c in c_samples:
        attempts = [as_fraction(c)] + [_fresh_c(rng) for _ in range(RETRY_BUDGET)]
        found = None
        for value in attempts:
            child = reproduce(t, i, value)
            if is_generic(child.y, child.data):
                found = (child, value)
                break
        if found is None:
            yield None, as_fraction(c), (g, yi)
        else:
            yield found[0], found[1], (g, yi)


def explore(
    seed: BetheTuple,
    depth: int,
    c_samples: Iterable = DEFAULT_C_SAMPLES,
    rng_seed: int = 0,
    verify: bool = True,
) -> PopulationGraph:
    """Breadth-first exploration of all reproduction moves up to ``depth``."""
    rng = random.Random(rng_seed)
    c_samples = tuple(as_fraction(c) for c in c_samples)
    graph = PopulationGraph(seed_value=rng_seed)
    root, _ = graph.add(seed, 0)
    _annotate(graph.nodes[root], verify)
    queue = deque([root])
    while queue:
        current = queue.popleft()
        info = graph.nodes[current]
        if info.depth >= depth:
            continue
        t = info.tuple
        for move in t.parity.moves():
            kind = move_kind(t, move)
            children = []
            try:
                if kind == "bosonic":
                    for child, c, family in _bosonic_children(t, move, c_samples, rng):
                        if child is None:
                            info.degenerate.append((move, c))
                        else:
                            children.append((child, c, family))
                else:
                    child = reproduce(t, move)
                    if is_generic(child.y, child.data):
                        children.append((child, None, None))
                    else:
                        info.degenerate.append((move, None))
            except (NoPolynomialSolution, NotFertile, ZeroDescendant) as exc:
                info.infertile[move] = f"{type(exc).__name__}: {exc}"
                continue
            for child, c, family in children:
                target, new = graph.add(child, info.depth + 1)
                graph.edges.append(Edge(current, target, move, c, kind, family))
                if new:
                    _annotate(graph.nodes[target], verify)
                    queue.append(target)
    return graph


def _annotate(info: NodeInfo, verify: bool) -> None:
    t = info.tuple
    info.generic = bool(is_generic(t.y, t.data))
    if verify and info.generic:
        info.verified = verify_bae(t.y, t.data).ok
    try:
        info.a_typical = a_typical(t.weights, t.parity) if t.parity.algebra.kind != GL else None
    except ValueError:
        info.a_typical = None


# -- invariance ---------------------------------------------------------------------

@dataclass
class InvarianceReport:
    reference: Optional[RatPDO]
    scalars: dict
    violations: list
    symmetric: dict
    injective: bool

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "operator": frac_to_json(self.reference) if self.reference is not None else None,
            "scalars": {str(k): str(v) for k, v in sorted(self.scalars.items())},
            "violations": self.violations,
            "symmetric": {str(k): v for k, v in sorted(self.symmetric.items())},
            "injective_at_fixed_kappa": self.injective,
        }


def invariance_check(graph: PopulationGraph, check_symmetry: bool = True) -> InvarianceReport:
    """Compare the invariant operator across all nodes (up to a nonzero scalar)."""
    if not graph.nodes:
        raise ValueError("empty population")
    operators = [operator_R(n.tuple) for n in graph.nodes]
    reference = operators[0]
    scalars, violations, symmetric = {}, [], {}
    for k, op in enumerate(operators):
        ratio = frac_ratio(op, reference)
        if ratio is None or ratio == 0:
            violations.append(k)
        else:
            scalars[k] = ratio
        if check_symmetry:
            symmetric[k] = symmetry_sign(op) is not None
    chains = {}
    injective = True
    for n in graph.nodes:
        t = n.tuple
        key = (t.parity.s, t.parity.kappa, tuple(f for f, _ in operator_chain(t)))
        if key in chains and chains[key] != t.key:
            injective = False
        chains[key] = t.key
    return InvarianceReport(reference.reduced(), scalars, violations, symmetric, injective)


def graph_summary(graph: PopulationGraph) -> dict:
    nodes = graph.nodes
    return {
        "nodes": len(nodes),
        "edges": len(graph.edges),
        "generic": sum(1 for n in nodes if n.generic),
        "verified": sum(1 for n in nodes if n.verified),
        "fertile": sum(1 for n in nodes if n.fertile),
        "degenerate_attempts": sum(len(n.degenerate) for n in nodes),
    }


def graph_to_json_text(graph: PopulationGraph) -> str:
    return json.dumps(graph.to_json(), indent=2, sort_keys=True)


__all__ = [
    "DEFAULT_C_SAMPLES",
    "Edge",
    "InvarianceReport",
    "NodeInfo",
    "PopulationGraph",
    "chain_to_json",
    "explore",
    "graph_summary",
    "invariance_check",
    "lift_to_gl",
    "lifted_weights",
    "lifted_y",
    "mirrored_half",
    "operator_R",
    "operator_chain",
    "seed_trivial",
    "unmirror",
]
