"""From a Bethe tuple to its self-dual superspace and back through flags.

Run with ``python demos/selfdual_tour.py``.
"""

import random

from ospbethe.liedata import Algebra, WeightData, hook_weights, standard_parity
from ospbethe.population import operator_R, seed_trivial
from ospbethe.superspace import (
    canonical_witt,
    chain_is_symmetric,
    factorization_to_flag,
    flag_to_factorization,
    random_isotropic_flag,
    same_flag,
    selfdual_report,
    superkernel,
)


def tour(name: str, partition: list) -> None:
    algebra = Algebra.parse(name)
    parity = standard_parity(algebra)
    coords = hook_weights(partition, algebra.m, algebra.n)
    seed = seed_trivial(parity, WeightData([coords], [0], parity))

    space = superkernel(operator_R(seed))
    print(f"{name}, hook {partition}: superkernel of dimension {space.dims}")
    print(f"  V = {[str(f) for f in space.V.basis]}")
    print(f"  U = {[str(f) for f in space.U.basis]}")
    report = selfdual_report(space)
    print(f"  self-duality checks passed: {report['ok']}")

    witt = canonical_witt(space)
    print(f"  Witt basis exact over Q: {witt.exact}")

    flag = random_isotropic_flag(space, random.Random(0))
    chain = flag_to_factorization(flag)
    back = factorization_to_flag(chain, space)
    print(f"  random isotropic flag gives a symmetric chain: {chain_is_symmetric(chain)}")
    print(f"  chain recovers the flag: {same_flag(back, flag)}")


if __name__ == "__main__":
    tour("osp(3|2)", [1, 1])
    tour("osp(4|0)", [2, 1])
