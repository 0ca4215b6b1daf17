import random
from fractions import Fraction

import pytest

from measureflow import (
    NegativeMeasure,
    NotAcyclic,
    NotPseudometric,
    Pseudometric,
    SignedMeasure2,
    WalkMeasure,
    decompose_paths,
    is_acyclic,
    is_circulation,
    marginals,
    setminus,
    shortcut_check,
    split_acyclic_circulation,
    walk_operators,
)
from measureflow.generators import random_acyclic, random_pseudometric, small_space
from conftest import m2


def test_walk_measure_validates(smt):
    tau = WalkMeasure(smt, [(("s", "m", "t"), Fraction(1, 2))])
    assert len(tau) == 1
    assert tau.total_weight() == Fraction(1, 2)
    with pytest.raises(ValueError):
        WalkMeasure(smt, [((), 1)])
    with pytest.raises(KeyError):
        WalkMeasure(smt, [(("s", "zz"), 1)])
    with pytest.raises(ValueError):
        WalkMeasure(smt, [(("s", "m"), 0)])


def test_walk_operators_path(smt):
    tau = WalkMeasure(smt, [(("s", "m", "t"), 2), (("s", "t"), 1)])
    V, E, Z = walk_operators(tau)
    assert V.as_dict() == {"s": 3, "m": 2}
    assert E.as_dict() == {("s", "m"): 2, ("m", "t"): 2, ("s", "t"): 1}
    assert Z.as_dict() == {("s", "t"): 3}


def test_walk_operators_revisits_count_multiplicity(smt):
    tau = WalkMeasure(smt, [(("s", "m", "s", "t"), 1)])
    V, E, Z = walk_operators(tau)
    assert V.as_dict() == {"s": 2, "m": 1}
    assert E.as_dict() == {("s", "m"): 1, ("m", "s"): 1, ("s", "t"): 1}
    assert Z.as_dict() == {("s", "t"): 1}


def test_walk_operators_single_step(ab):
    tau = WalkMeasure(ab, [(("a", "b"), 5)])
    V, E, Z = walk_operators(tau)
    assert V.as_dict() == {"a": 5}
    assert E == Z


def test_walk_operators_trivial_walk(ab):
    tau = WalkMeasure(ab, [(("a",), 2)])
    V, E, Z = walk_operators(tau)
    assert V.as_dict() == {}
    assert E.as_dict() == {}
    assert Z.as_dict() == {("a", "a"): 2}


def test_is_acyclic_detects_loops(abc):
    path = m2(abc, {("a", "b"): 1, ("b", "c"): 2})
    assert is_acyclic(path) is True
    loop = m2(abc, {("b", "b"): 1})
    w = is_acyclic(loop)
    assert isinstance(w, SignedMeasure2)
    assert w[("b", "b")] == 1
    cyc = m2(abc, {("a", "b"): 3, ("b", "a"): 2})
    w = is_acyclic(cyc)
    assert isinstance(w, SignedMeasure2)
    assert is_circulation(w)
    assert w.leq(cyc)
    with pytest.raises(NegativeMeasure):
        is_acyclic(m2(abc, {("a", "b"): -1}))


def test_split_acyclic_circulation(abc):
    mu = m2(
        abc,
        {("a", "b"): 3, ("b", "c"): 1, ("b", "a"): 2, ("c", "a"): "1/2"},
    )
    rest, circ = split_acyclic_circulation(mu)
    assert rest + circ == mu
    assert is_circulation(circ)
    assert is_acyclic(rest) is True
    assert rest.is_nonnegative() and circ.is_nonnegative()


def test_decompose_paths_exact(smt):
    phi = m2(smt, {("s", "m"): 1, ("m", "t"): 1, ("s", "t"): "1/2"})
    tau = decompose_paths(phi)
    _, E, Z = walk_operators(tau)
    assert E == phi
    first, second = marginals(phi)
    zf, zs = marginals(Z)
    assert zf == setminus(first, second)
    assert zs == setminus(second, first)


def test_decompose_paths_rejects_cycles(ab):
    cyc = m2(ab, {("a", "b"): 1, ("b", "a"): 1})
    with pytest.raises(NotAcyclic):
        decompose_paths(cyc)


def test_decompose_paths_random_suite():
    rng = random.Random(123)
    for _ in range(30):
        space = small_space(rng.randint(2, 6))
        phi = random_acyclic(space, rng)
        if phi.mass() == 0:
            continue
        tau = decompose_paths(phi)
        _, E, Z = walk_operators(tau)
        assert E == phi
        first, second = marginals(phi)
        assert marginals(Z)[0] == setminus(first, second)
        assert marginals(Z)[1] == setminus(second, first)
        # every walk in the peeled family is a simple path
        for walk, _ in tau:
            assert len(set(walk)) == len(walk)


def test_shortcut_check_triangle(smt):
    D = Pseudometric.from_dict(
        smt,
        {("s", "m"): 1, ("m", "s"): 1, ("m", "t"): 1, ("t", "m"): 1,
         ("s", "t"): 2, ("t", "s"): 2},
    )
    tau = WalkMeasure(smt, [(("s", "m", "t"), 1)])
    lhs, rhs = shortcut_check(D, tau)
    assert lhs == 2 and rhs == 2
    D2 = Pseudometric.from_dict(
        smt,
        {("s", "m"): 1, ("m", "s"): 1, ("m", "t"): 1, ("t", "m"): 1,
         ("s", "t"): 1, ("t", "s"): 1},
    )
    lhs, rhs = shortcut_check(D2, tau)
    assert lhs == 2 and rhs == 1


def test_shortcut_check_rejects_non_metric(smt):
    bad = Pseudometric.from_dict(
        smt,
        {("s", "m"): 1, ("m", "s"): 1, ("m", "t"): 1, ("t", "m"): 1,
         ("s", "t"): 5, ("t", "s"): 5},
    )
    tau = WalkMeasure(smt, [(("s", "t"), 1)])
    with pytest.raises(NotPseudometric):
        shortcut_check(bad, tau)


def test_shortcut_check_random_safety():
    rng = random.Random(31337)
    for _ in range(40):
        space = small_space(rng.randint(2, 5))
        D = random_pseudometric(space, rng)
        phi = random_acyclic(space, rng)
        if phi.mass() == 0:
            continue
        tau = decompose_paths(phi)
        lhs, rhs = shortcut_check(D, tau)
        assert lhs >= rhs
