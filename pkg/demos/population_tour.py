"""Walk through an osp(3|2) population: seed, moves, lift and the invariant operator.

Run with ``python demos/population_tour.py [problem.json]``.
"""

import json
import sys
from collections import Counter
from pathlib import Path

from ospbethe.bethe import verify_tuple
from ospbethe.cli import load_problem
from ospbethe.population import explore, invariance_check, lift_to_gl, operator_R, seed_trivial

HERE = Path(__file__).parent


def main(path: str = str(HERE / "problems" / "osp3_2.json")) -> None:
    problem = load_problem(json.loads(Path(path).read_text()))
    seed = seed_trivial(problem.parity, problem.weights)
    print(f"algebra {problem.parity.algebra}, parity {problem.parity.s}")
    print(f"seed tuple y = {[str(p) for p in seed.y]}")

    graph = explore(seed, problem.depth, problem.c_samples)
    kinds = Counter(e.kind for e in graph.edges)
    print(f"explored to depth {problem.depth}: {len(graph)} tuples, edges by kind {dict(kinds)}")

    # a few descendants, each checked again from scratch
    for info in graph.nodes[1:4]:
        t = info.tuple
        print(f"  depth {info.depth}  parity {t.parity.s}  y = {[str(p) for p in t.y]}"
              f"  verifies: {verify_tuple(t).ok}")

    lifted = lift_to_gl(graph.nodes[-1].tuple)
    print(f"gl lift of the last tuple: {[str(p) for p in lifted.y]}")
    print(f"lift verifies as a gl tuple: {verify_tuple(lifted).ok}")

    report = invariance_check(graph)
    print(f"R is the same on every tuple: {report.ok}")
    print(f"R = {operator_R(seed)}")


if __name__ == "__main__":
    main(*sys.argv[1:])
