"""End-to-end acceptance suite; each test prints one PASS/FAIL line."""

import random
import time
from fractions import Fraction

import pytest

from ospbethe.bethe import direct_bae, is_generic, verify_bae, verify_tuple
from ospbethe.exactalg import X, rational_roots
from ospbethe.liedata import (
    coords_at,
    hook_weights,
    lift_coords,
    parity_step,
    swap_last_two,
    table1_transform,
)
from ospbethe.orepdo import (
    D,
    ONE_OP,
    DiffOp,
    RatPDO,
    diffop_adjoint,
    diffop_divrem,
    frac_equal,
    frac_mul,
    left_to_right,
    switch_factors,
)
from ospbethe.population import (
    invariance_check,
    lift_to_gl,
    mirrored_half,
    operator_R,
    operator_chain,
    unmirror,
)
from ospbethe.superspace import (
    canonical_witt,
    chain_is_symmetric,
    factorization_to_flag,
    flag_to_factorization,
    form_symmetry,
    is_isotropic,
    orthogonal_complement,
    random_isotropic_flag,
    same_coord_span,
    same_flag,
    superkernel,
)
from conftest import population, random_op, random_rf
from test_liedata import _random_row_instance

F = Fraction


@pytest.fixture
def announce(capsys):
    def run(number: int, title: str, body):
        start = time.perf_counter()
        try:
            detail = body()
        except BaseException as exc:
            with capsys.disabled():
                print(f"\n[acceptance {number}] FAIL  {title}: {type(exc).__name__}: {exc}")
            raise
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            print(f"\n[acceptance {number}] PASS  {title} ({detail}; {elapsed:.1f} s)")

    return run


def _nonzero_op(rng, order):
    op = random_op(rng, order)
    while op.is_zero():
        op = random_op(rng, order)
    return op


def test_ore_algebra_suite(announce):
    def body():
        rng = random.Random(1)
        start = time.perf_counter()
        for _ in range(1000):
            a, b, c = (random_op(rng, rng.randint(0, 2)) for _ in range(3))
            b = b if not b.is_zero() else _nonzero_op(rng, 1)
            assert (a * b) * c == a * (b * c)
            assert diffop_adjoint(a * b) == diffop_adjoint(b) * diffop_adjoint(a)
            assert diffop_adjoint(diffop_adjoint(a)) == a
            q, r = diffop_divrem(a, b, "right")
            assert q * b + r == a and r.order < b.order
            q, r = diffop_divrem(a, b, "left")
            assert b * q + r == a and r.order < b.order
        elapsed = time.perf_counter() - start
        assert elapsed < 30, f"took {elapsed:.1f} s"
        return "1000 instances, 5 identities each"

    announce(1, "Ore algebra identities", body)


def test_switch_identities(announce):
    def body():
        rng = random.Random(2)
        start = time.perf_counter()
        pairs = 0
        while pairs < 100:
            a, b = random_rf(rng), random_rf(rng)
            if a == b:
                continue
            # numerator first, then denominator first, on the same pair
            c, e = switch_factors(a, b, "numfirst")
            lhs = RatPDO(DiffOp.linear(a), DiffOp.linear(b))
            assert frac_equal(lhs, left_to_right(DiffOp.linear(c), DiffOp.linear(e)))
            g, h = switch_factors(a, b, "denfirst")
            lhs = RatPDO(DiffOp.linear(g), DiffOp.linear(h))
            assert frac_equal(lhs, left_to_right(DiffOp.linear(a), DiffOp.linear(b)))
            pairs += 1
        for _ in range(100):
            f = random_rf(rng)
            lhs = RatPDO.from_chain([(f, 1), (0, -1), (-f, 1)])
            rhs = RatPDO.from_chain([(-f, 1), (0, -1), (f, 1)])
            assert frac_equal(lhs, rhs)
        elapsed = time.perf_counter() - start
        assert elapsed < 30, f"took {elapsed:.1f} s"
        return "100 pairs both ways, 100 plus/minus cases"

    announce(2, "switch identities", body)


def test_table1_involution(announce):
    def body():
        for row in range(1, 7):
            rng = random.Random(1000 + row)
            for _ in range(50):
                cd = _random_row_instance(row, rng)
                assert cd.is_admissible()
                once = table1_transform(cd, 2)
                twice = table1_transform(once, 2)
                assert twice.C == cd.C and twice.T == cd.T
        return "6 rows x 50 instances"

    announce(3, "Table 1 involution", body)


def _splitting_tuples():
    """Generic tuples with rationally split y: population nodes plus perturbations."""
    sources = [
        ("osp(3|2)", (1, 1), 3, (0,)),
        ("osp(3|2)", (1,), 2, (0, 1)),
        ("osp(2|2)", (2, 1), 3, (0,)),
        ("osp(4|2)", (1, 1), 2, (0,)),
        ("osp(4|0)", (2, 1), 2, (0,)),
        ("gl(2|1)", (1,), 3, (0,)),
    ]
    rng = random.Random(4)
    found = []
    for name, mu, depth, points in sources:
        for info in population(name, mu, depth, points).nodes:
            t = info.tuple
            if not info.generic or direct_bae(t.y, t.data) is None:
                continue
            found.append((t.y, t.data))
            # move one root of one polynomial to a random rational point
            rooted = [k for k, p in enumerate(t.y) if p.degree > 0]
            if not rooted:
                continue
            k = rng.choice(rooted)
            old = next(iter(rational_roots(t.y[k])))
            y = list(t.y)
            y[k] = (y[k] * (X - F(rng.randint(-40, 40), rng.randint(3, 9))) / (X - old)).num
            if is_generic(y, t.data).ok and direct_bae(y, t.data) is not None:
                found.append((tuple(y), t.data))
    return found


def test_wronskian_divisibility_equivalence(announce):
    def body():
        cases = _splitting_tuples()
        assert len(cases) >= 100, f"only {len(cases)} cases"
        outcomes = {True: 0, False: 0}
        for y, data in cases:
            direct = direct_bae(y, data)
            assert verify_bae(y, data).ok == direct
            outcomes[direct] += 1
        assert outcomes[True] and outcomes[False]
        return f"{len(cases)} tuples, {outcomes[True]} solutions, {outcomes[False]} non-solutions"

    announce(4, "Wronskian/divisibility form agrees with direct BAE", body)


def _table_data(source, edge):
    if edge.kind != "fermionic":
        return source.data
    data = table1_transform(source.data, edge.move)
    p = source.parity
    if p.type_d and edge.move == p.r and p.s[-2:] == (-1, 1):
        data = swap_last_two(data)
    return data


def test_osp32_end_to_end(announce):
    def body():
        start = time.perf_counter()
        population.cache_clear()
        g = population("osp(3|2)", (1, 1), 3)
        assert max(n.depth for n in g.nodes) >= 3
        for info in g.nodes:
            assert info.generic and verify_tuple(info.tuple).ok
        for e in g.edges:
            source, target = g.nodes[e.source].tuple, g.nodes[e.target].tuple
            assert verify_bae(target.y, _table_data(source, e)).ok
        report = invariance_check(g)
        assert report.ok and len(report.scalars) == len(g)
        elapsed = time.perf_counter() - start
        assert elapsed < 120, f"took {elapsed:.1f} s"
        return f"{len(g)} nodes, {len(g.edges)} edges re-verified, R invariant"

    announce(5, "osp(3|2) population end to end", body)


def test_fake_reproduction_type_d(announce):
    def body():
        pairs = 0
        for name, mu in (("osp(2|2)", (2, 1)), ("osp(4|2)", (1, 1))):
            g = population(name, mu, 3)
            alg = g.nodes[0].tuple.parity.algebra
            std = hook_weights(mu, alg.m, alg.n)
            for e in g.edges:
                source, target = g.nodes[e.source].tuple, g.nodes[e.target].tuple
                assert target.parity == parity_step(source.parity, e.move)
                if e.kind == "fake":
                    assert target.parity.kappa == -source.parity.kappa
                    assert frac_equal(operator_R(source), operator_R(target))
                    pairs += 1
            for info in g.nodes:
                t = info.tuple
                assert t.weights.weights[0] == coords_at(std, t.parity)
        assert pairs
        return f"{pairs} fake pairs with equal R"

    announce(6, "fake reproduction in type D", body)


POPULATIONS = [
    ("osp(3|2)", (1, 1), 3),
    ("osp(2|2)", (2, 1), 3),
    ("osp(4|2)", (1, 1), 2),
    ("osp(4|0)", (2, 1), 3),
    ("osp(5|2)", (1,), 2),
]


def test_self_dual_suite(announce):
    def body():
        rng = random.Random(7)
        for name, mu, depth in POPULATIONS:
            g = population(name, mu, depth)
            w = superkernel(operator_R(g.nodes[0].tuple))
            M, N = w.dims
            assert w.whole().monic_wronskian() == 1
            assert w.V.monic_wronskian() == w.U.monic_wronskian()
            gram = w.gram()
            unit = [[F(int(i == j)) for j in range(M + N)] for i in range(M + N)]
            assert same_coord_span(orthogonal_complement(gram, unit[M:]), unit[:M])
            sym = form_symmetry(gram)
            assert sym == (1 if (M + N) % 2 else -1)
            witt = canonical_witt(w)
            assert witt.exact and all(witt.identities())
            # the space does not depend on the node
            for info in rng.sample(g.nodes, min(5, len(g.nodes))):
                other = superkernel(operator_R(info.tuple))
                assert other.V.same_span(w.V) and other.U.same_span(w.U)
        return f"{len(POPULATIONS)} populations"

    announce(7, "self-dual superspaces", body)


def test_even_case_shape(announce):
    def body():
        g = population("osp(4|0)", (2, 1), 3)
        for info in g.nodes:
            t = info.tuple
            chain = operator_chain(t)
            half = mirrored_half(t)
            assert chain[len(half)] == (0, -1)
            d = ONE_OP
            for f, s in half:
                assert s == 1
                d = d * DiffOp.linear(f)
            shape = frac_mul(frac_mul(RatPDO(d), RatPDO(ONE_OP, D)), RatPDO(diffop_adjoint(d)))
            assert frac_equal(operator_R(t), shape)
        return f"{len(g)} osp(4|0) nodes"

    announce(8, "even case R = D d^-1 D*", body)


def test_gl_lift_round_trip(announce):
    def body():
        count = 0
        for name, mu, depth in (("osp(3|2)", (1, 1), 3), ("osp(5|2)", (1,), 2)):
            for info in population(name, mu, depth).nodes:
                t = info.tuple
                lifted = lift_to_gl(t)
                assert verify_tuple(lifted).ok
                n = len(lifted.y)
                assert all(lifted.y[k] == lifted.y[n - 1 - k] for k in range(n))
                s = lifted.parity.s
                assert s == tuple(reversed(s)) and s[: t.parity.r] == t.parity.s
                for coords, lifted_coords in zip(t.weights.weights, lifted.weights.weights):
                    assert lifted_coords == lift_coords(coords, t.parity)
                    assert lifted_coords == tuple(coords) + tuple(-v for v in reversed(coords))
                assert unmirror(lifted, t.parity, t.weights) == t
                count += 1
        return f"{count} osp(2m+1|2n) nodes"

    announce(9, "gl lift of odd orthosymplectic nodes", body)


def test_flag_factorization_bijection(announce):
    def body():
        spaces = []
        for name, mu in (
            ("osp(3|2)", (1, 1)),
            ("osp(2|2)", (2, 1)),
            ("osp(4|0)", (2, 1)),
            ("osp(1|2)", (1,)),
            ("osp(5|0)", (1,)),
            ("osp(4|2)", (1, 1)),
        ):
            seed = population(name, mu, 0).nodes[0].tuple
            w = superkernel(operator_R(seed))
            assert w.dim <= 5
            spaces.append(w)
        rng = random.Random(10)
        for k in range(50):
            w = spaces[k % len(spaces)]
            flag = random_isotropic_flag(w, rng)
            assert is_isotropic(flag, w)
            chain = flag_to_factorization(flag)
            assert chain_is_symmetric(chain)
            assert same_flag(factorization_to_flag(chain, w), flag)
        dims = sorted({w.dims for w in spaces})
        return f"50 flags over superspaces of dims {dims}"

    announce(10, "isotropic flags and symmetric factorizations", body)
