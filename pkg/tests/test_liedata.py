import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ospbethe.exactalg import FactoredFunction, X
from ospbethe.liedata import (
    Algebra,
    CartanData,
    ExtParity,
    InvalidMove,
    WeightData,
    all_parities,
    cartan_matrix,
    coords_at,
    hook_weights,
    is_generalized_cartan,
    parity_step,
    pt_sequences,
    rescaling_between,
    sigma_perm,
    standard_parity,
    swap_last_two,
    table1_transform,
    weight_step,
)

F = Fraction


def algebras(max_rank=4):
    out = []
    for kind in ("gl", "osp_odd", "osp_even"):
        for m in range(max_rank + 1):
            for n in range(max_rank + 1 - m):
                try:
                    out.append(Algebra.parse(kind, m, n))
                except ValueError:
                    pass
    return out


def ones(size):
    return [FactoredFunction.one()] * size


# worked examples


def test_sigma_examples():
    assert sigma_perm((1, 1, -1))[0] == (1, 2, 3)
    assert sigma_perm((-1, 1))[0] == (2, 1)


def test_osp32_cartan_matrix():
    p = ExtParity(Algebra.parse("osp(3|2)"), (1, -1))
    assert cartan_matrix(p) == [[0, 1], [-2, 2]]


def test_gl_block_all_even():
    c = cartan_matrix(standard_parity(Algebra.parse("gl(4|0)")))
    assert c[1][1:3] == [2, -1]


def test_type_d_corner():
    c = cartan_matrix(ExtParity(Algebra.parse("osp(6|2)"), (-1, 1, 1, 1)))
    assert [row[-3:] for row in c[-3:]] == [[2, -1, -1], [-1, 2, 0], [-1, 0, 2]]


def test_hook_weight_examples():
    assert hook_weights([2, 1], 1, 1) == (2, 1)
    assert hook_weights([], 2, 1) == (0, 0, 0)
    assert hook_weights([3, 2, 2], 2, 1, kind=-1) == (3, 2, -2)


def test_weight_step_examples():
    p = ExtParity(Algebra.parse("gl(1|1)"), (1, -1))
    assert weight_step((1, 0), p, 1) == (1, 0)
    assert weight_step((1, -1), p, 1) == (-1, 1)
    q = standard_parity(Algebra.parse("osp(4|0)"))
    assert weight_step((F(3), F(2)), q, "f") == (3, -2)


def test_pt_examples():
    p = ExtParity(Algebra.parse("gl(1|1)"), (1, -1))
    P, T = pt_sequences(WeightData([(1, 0)], [0], p), p)
    assert [f.to_rational_function() for f in P] == [X, 1]
    assert T[0].to_rational_function() == X
    q = standard_parity(Algebra.parse("osp(5|2)"))
    P, T = pt_sequences(WeightData([(0, 0, 0)], [0], q), q)
    assert all(t.is_one() for t in P + T)
    P, T = pt_sequences(WeightData([(2, 1, 1)], [1], q), q)
    assert T[-1] == P[-1] ** 2


def test_table1_row_two_example():
    # columns (k, i, j); row i = (-1, 0, 1), row j = (0, -1, 0); row k is a bosonic neighbour
    c = [[2, -1, 0], [-1, 0, 1], [0, -1, 0]]
    t = [FactoredFunction({1: 2}), FactoredFunction({0: 1, 2: -1}), FactoredFunction({3: 1})]
    out = table1_transform(CartanData(c, t), 2)
    assert list(out.C[2]) == [0, -1, 2]
    pi_i = FactoredFunction({0: 1, 2: 1})
    assert out.T[2] == t[1] / (pi_i * t[2])
    assert out.C[1] == CartanData(c, t).C[1]


def test_table1_leaves_rows_without_contact():
    c = [[2, -1, 0], [-1, 0, 1], [0, -1, 2]]
    t = [FactoredFunction({1: 1}), FactoredFunction({0: 1}), FactoredFunction({2: 1})]
    cd = CartanData(c, t)
    out = table1_transform(cd, 2)
    assert out.C[1] == cd.C[1] and out.T[1] == cd.T[1]
    assert table1_transform(cd, 1) is cd


def test_parity_step_examples():
    alg = Algebra.parse("osp(4|2)")
    p = ExtParity(alg, (1, -1, 1))
    assert parity_step(p, 1).s == (-1, 1, 1)
    assert parity_step(p, "f").kappa == -1
    c_type = ExtParity(alg, (1, 1, -1))
    assert parity_step(c_type, 3) == c_type
    with pytest.raises(InvalidMove):
        parity_step(c_type, "f")


# exhaustive and randomized properties


@pytest.mark.parametrize("alg", algebras(), ids=str)
def test_cartan_matrices_are_generalized(alg):
    for p in all_parities(alg):
        assert is_generalized_cartan(cartan_matrix(p))


@pytest.mark.parametrize("alg", algebras(), ids=str)
def test_table1_matches_parity_moves(alg):
    for p in all_parities(alg):
        c = cartan_matrix(p)
        for move in p.moves():
            if move == "f":
                continue
            q = parity_step(p, move)
            image = table1_transform(CartanData(c, ones(len(c))), move)
            target = CartanData(cartan_matrix(q), ones(len(c)))
            if p.type_d and move == p.r and p.s[-2:] == (-1, 1):
                target = swap_last_two(target)
            factors = rescaling_between(image, target)
            assert factors is not None
            if any(d != 1 for d in factors):
                # only the sign of the last zero-length row may differ (type C to type D)
                assert p.type_c and move == p.r - 1
                assert factors[:-1] == [1] * (len(c) - 1) and factors[-1] == -1


@pytest.mark.parametrize("alg", algebras(3), ids=str)
def test_transported_weights_match_table1(alg):
    rng = random.Random(str(alg))
    size = alg.r
    for _ in range(3):
        coords = [F(rng.randint(0, 3)) for _ in range(size)]
        coords.sort(reverse=True)
        p0 = standard_parity(alg)
        for p in all_parities(alg):
            try:
                here = coords_at(coords, p)
                w = WeightData([here], [0], p)
                data = CartanData(cartan_matrix(p), pt_sequences(w, p, check=False)[1])
            except (InvalidMove, ValueError):
                continue
            for move in p.moves():
                if move == "f":
                    continue
                q = parity_step(p, move)
                moved = WeightData([weight_step(here, p, move)], [0], q)
                target = CartanData(cartan_matrix(q), pt_sequences(moved, q, check=False)[1])
                if p.type_d and move == p.r and p.s[-2:] == (-1, 1):
                    target = swap_last_two(target)
                assert rescaling_between(table1_transform(data, move), target) is not None
        assert p0.s.count(1) == alg.m


def test_coords_round_trip_through_fake_move():
    alg = Algebra.parse("osp(4|2)")
    std = hook_weights([2, 1], alg.m, alg.n)
    for p in all_parities(alg):
        if not p.type_d:
            continue
        here = coords_at(std, p)
        back = weight_step(weight_step(here, p, "f"), parity_step(p, "f"), "f")
        assert back == here


@given(st.data())
def test_parity_moves_are_involutions(data):
    alg = data.draw(st.sampled_from(algebras(4)))
    p = data.draw(st.sampled_from(all_parities(alg)))
    if not p.moves():
        return
    move = data.draw(st.sampled_from(p.moves()))
    q = parity_step(p, move)
    if move == p.r and p.algebra.kind == "osp_even" and p.type_d:
        # the r-th type D move composes with the fake move
        assert q.s[-1] == p.s[-2] and q.s[-2] == p.s[-1]
    else:
        assert parity_step(q, move) == p


# six-row Table 1 involution on random admissible data


def _random_row_instance(row: int, rng: random.Random, normalized: bool = True) -> CartanData:
    """3x3 data with columns (k, i, j), i fermionic, row j in the requested table pattern.

    With ``normalized`` the zero-diagonal rows 2/4 satisfy c_ji = -c_ij.
    """
    with_k = row in (1, 2, 5)  # rows with q1 != 0
    q1 = rng.choice([-3, -2, -1, 1, 2]) if with_k else 0
    q2 = rng.choice([-2, -1, 1, 2, 3])
    q3 = rng.randint(0, 3)
    if row in (1, 3):
        row_j = [-q3, -1, 2]
    elif row in (2, 4):
        row_j = [-q3, -(q2 if normalized else rng.choice([-2, -1, 1, 2, 3])), 0]
    else:
        row_j = [-q3, -(rng.randint(1, 3) + 1), 2]
    row_k = [2, -1 if with_k else 0, -rng.randint(0, 2)]
    if row_j[0] == 0 and row_k[2] != 0:
        row_k[2] = 0
    if row_j[0] != 0 and row_k[2] == 0:
        row_k[2] = -1
    c = [row_k, [q1, 0, q2], row_j]
    points = [F(v, 2) for v in range(-4, 5)]

    def poly_factor():
        chosen = rng.sample(points, rng.randint(0, 3))
        return FactoredFunction({z: rng.randint(1, 3) for z in chosen})

    def any_factor():
        chosen = rng.sample(points, rng.randint(1, 3))
        return FactoredFunction({z: rng.choice([-2, -1, 1, 2, 3]) for z in chosen})

    t = [poly_factor(), any_factor(), poly_factor() if row_j[2] == 2 else any_factor()]
    return CartanData(c, t)


@pytest.mark.parametrize("row", range(1, 7))
def test_table1_involution_per_row(row):
    rng = random.Random(row)
    for _ in range(20):
        cd = _random_row_instance(row, rng)
        assert cd.is_admissible()
        twice = table1_transform(table1_transform(cd, 2), 2)
        assert twice.C == cd.C and twice.T == cd.T


@pytest.mark.parametrize("row", (2, 4))
def test_table1_twice_rescales_unnormalized_zero_rows(row):
    rng = random.Random(100 + row)
    for _ in range(20):
        cd = _random_row_instance(row, rng, normalized=False)
        q2, q4 = cd.C[1][2], -cd.C[2][1]
        twice = table1_transform(table1_transform(cd, 2), 2)
        assert rescaling_between(cd, twice) == [1, 1, q2 / q4]
