from fractions import Fraction

import pytest

from measureflow import (
    AtomSpace,
    CutChain,
    NegativeMeasure,
    Potential,
    SignedMeasure1,
    SignedMeasure2,
    circulation_space_dim,
    eval_potential,
    is_circulation,
    jordan,
    marginals,
    meet,
    positive_part,
    potential_to_cuts,
    product,
    setminus,
    transpose,
    tv_norm,
)
from conftest import m1, m2


def test_space_basics():
    sp = AtomSpace(("a", "b", "c"))
    assert sp.n == 3
    assert sp.index("b") == 1
    assert sp.indices(["c", "a"]) == frozenset({0, 2})
    with pytest.raises(KeyError):
        sp.index("zz")
    with pytest.raises(ValueError):
        AtomSpace(("a", "a"))


def test_space_intervals_must_tile():
    AtomSpace(("a", "b"), ((0, Fraction(1, 2)), (Fraction(1, 2), 1)))
    with pytest.raises(ValueError):
        AtomSpace(("a", "b"), ((0, Fraction(1, 3)), (Fraction(1, 2), 1)))


def test_marginals_and_transpose(smt):
    mu = m2(smt, {("s", "m"): 2, ("m", "t"): 3, ("s", "t"): "1/2"})
    first, second = marginals(mu)
    assert first.as_dict() == {"s": Fraction(5, 2), "m": 3}
    assert second.as_dict() == {"m": 2, "t": Fraction(7, 2)}
    assert transpose(mu)[("m", "s")] == 2
    assert transpose(transpose(mu)) == mu
    # transpose swaps the marginals
    tf, ts = marginals(transpose(mu))
    assert tf == second and ts == first


def test_jordan_tv_and_mass(ab):
    mu = m2(ab, {("a", "b"): 3, ("b", "a"): -2})
    pos, neg = jordan(mu)
    assert pos.is_nonnegative() and neg.is_nonnegative()
    assert pos - neg == mu
    assert meet(pos, neg).mass() == 0
    assert tv_norm(mu) == 5
    assert mu.mass() == 1
    assert positive_part(mu) == pos


def test_meet_setminus(ab):
    x = m1(ab, {"a": 3, "b": 1})
    y = m1(ab, {"a": 1, "b": 2})
    assert meet(x, y).as_dict() == {"a": 1, "b": 1}
    assert setminus(x, y).as_dict() == {"a": 2}
    assert setminus(y, x).as_dict() == {"b": 1}
    with pytest.raises(NegativeMeasure):
        meet(x - y - y, y)


def test_product_and_pairing(ab):
    lam = m1(ab, {"a": 2, "b": 3})
    rho = m1(ab, {"a": "1/2", "b": 1})
    pr = product(lam, rho)
    assert pr[("b", "a")] == Fraction(3, 2)
    assert pr.mass() == lam.mass() * rho.mass()
    other = m2(ab, {("b", "a"): 2})
    assert pr.pairing(other) == 3


def test_is_circulation(abc):
    cyc = m2(abc, {("a", "b"): 1, ("b", "c"): 1, ("c", "a"): 1})
    path = m2(abc, {("a", "b"): 1, ("b", "c"): 1})
    assert is_circulation(cyc)
    assert not is_circulation(path)
    # self-loops never break balance
    assert is_circulation(cyc + m2(abc, {("b", "b"): 7}))


def test_potential_table_and_normalize(abc):
    f = Potential.from_dict(abc, {"a": 2, "b": 5})
    table = f.pair_table()
    assert table[("b", "a")] == 3
    assert table[("a", "c")] == 2
    g = Potential.from_dict(abc, {"a": -1, "b": 2, "c": 0}).normalized()
    assert min(g.f) == 0
    assert g.pair_table() == Potential.from_dict(
        abc, {"a": -1, "b": 2, "c": 0}
    ).pair_table()


def test_eval_potential_vanishes_on_circulations(abc):
    cyc = m2(abc, {("a", "b"): 1, ("b", "c"): 1, ("c", "a"): 1})
    f = Potential.from_dict(abc, {"a": 4, "b": -1, "c": Fraction(2, 3)})
    assert eval_potential(cyc, f) == 0
    path = m2(abc, {("a", "c"): 2})
    assert eval_potential(path, f) == 2 * (4 - Fraction(2, 3))


def test_potential_to_cuts_reconstructs(abc):
    f = Potential.from_dict(abc, {"a": 0, "b": Fraction(3, 2), "c": 3})
    chain = potential_to_cuts(f)
    assert len(chain) == 2
    for i in range(3):
        for j in range(3):
            assert chain.eval_pair(i, j) == f.F(i, j)
    assert chain.to_potential() == f


def test_cut_chain_validates(abc):
    with pytest.raises(ValueError):
        CutChain(abc, [(1, {0, 1}, 1), (0, {0}, 1)])
    with pytest.raises(ValueError):
        CutChain(abc, [(0, {0, 1}, 1), (1, {0, 1}, 1)])
    with pytest.raises(ValueError):
        CutChain(abc, [(0, {0}, -1)])


def test_circulation_space_dim():
    from measureflow import gen_cyclic

    for q in (2, 3, 5):
        _, eta = gen_cyclic(q)
        assert circulation_space_dim(eta) == 1
    sp = AtomSpace(("s", "m", "t"))
    path = m2(sp, {("s", "m"): 1, ("m", "t"): 1})
    assert circulation_space_dim(path) == 0
    assert circulation_space_dim(SignedMeasure2.zero(sp)) == 0
    full = SignedMeasure2.constant(sp, 1)
    # n^2 pairs minus (n-1) independent balance constraints
    assert circulation_space_dim(full) == 9 - 2


def test_rect_and_total_set(smt):
    mu = m2(smt, {("s", "m"): 1, ("s", "t"): 2, ("m", "t"): 4})
    assert mu.rect([0], [1, 2]) == 3
    assert mu.rect([0, 1], [2]) == 6
    lam = m1(smt, {"s": 1, "t": "1/4"})
    assert lam.total_set([0, 2]) == Fraction(5, 4)


def test_arithmetic_and_scaling(ab):
    x = m2(ab, {("a", "b"): 1})
    y = m2(ab, {("b", "a"): "1/2"})
    assert (x + y - y) == x
    assert (-x).mass() == -1
    assert x.scale(Fraction(2, 3))[("a", "b")] == Fraction(2, 3)
    sp2 = AtomSpace(("a", "c"))
    with pytest.raises(ValueError):
        x + m2(sp2, {("a", "c"): 1})
