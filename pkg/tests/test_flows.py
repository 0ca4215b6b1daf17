import random
from fractions import Fraction

import pytest

from measureflow import (
    AtomSpace,
    BoundOrderViolation,
    CutCertificate,
    PartitionInvalid,
    Potential,
    PotentialCertificate,
    SignedMeasure2,
    ergodic_circulation,
    feasible_circulation,
    integralize_potential,
    is_circulation,
    iter_ordered_partitions,
    partition_condition,
    valued_circulation,
)
from measureflow.generators import random_bounds, small_space
from measureflow.verify import VerificationFailure, verify_hoffman_cut
from conftest import m2


def brute_force_hoffman(phi, psi):
    """Check every cut X: feasible iff phi(X x Xc) <= psi(Xc x X)."""
    n = phi.space.n
    for mask in range(1, 2**n - 1):
        inside = [i for i in range(n) if mask >> i & 1]
        outside = [i for i in range(n) if not mask >> i & 1]
        if phi.rect(inside, outside) > psi.rect(outside, inside):
            return False
    return True


def test_circulation_two_atom_certificate(ab):
    phi = m2(ab, {("a", "b"): 1})
    psi = m2(ab, {("a", "b"): 1, ("b", "a"): "1/2"})
    cert = feasible_circulation(phi, psi)
    assert isinstance(cert, CutCertificate)
    assert cert.set_X == frozenset({"a"})
    assert cert.lhs == 1
    assert cert.rhs == Fraction(1, 2)


def test_circulation_two_atom_feasible(ab):
    phi = m2(ab, {("a", "b"): 1})
    psi = m2(ab, {("a", "b"): 1, ("b", "a"): 1})
    alpha = feasible_circulation(phi, psi)
    assert isinstance(alpha, SignedMeasure2)
    assert is_circulation(alpha)
    assert phi.leq(alpha) and alpha.leq(psi)


def test_circulation_bound_order(ab):
    phi = m2(ab, {("a", "b"): 2})
    psi = m2(ab, {("a", "b"): 1})
    with pytest.raises(BoundOrderViolation):
        feasible_circulation(phi, psi)


def test_circulation_diagonal_entries_pass_through(ab):
    phi = m2(ab, {("a", "a"): "1/3"})
    psi = m2(ab, {("a", "a"): 1})
    alpha = feasible_circulation(phi, psi)
    assert isinstance(alpha, SignedMeasure2)
    assert alpha[("a", "a")] >= Fraction(1, 3)


def test_circulation_matches_brute_force():
    rng = random.Random(42)
    for trial in range(60):
        space = small_space(rng.randint(2, 5))
        phi, psi = random_bounds(space, rng, density=0.45,
                                 signed=trial % 3 == 0)
        out = feasible_circulation(phi, psi)
        assert brute_force_hoffman(phi, psi) == isinstance(out, SignedMeasure2)
        if isinstance(out, CutCertificate):
            verify_hoffman_cut(phi, psi, out, 0)


def test_valued_circulation_cycle(abc):
    lo = SignedMeasure2.zero(abc)
    hi = m2(abc, {("a", "b"): 1, ("b", "c"): 1, ("c", "a"): 1})
    v = hi
    alpha = valued_circulation(lo, hi, v, 3)
    assert isinstance(alpha, SignedMeasure2)
    assert alpha.pairing(v) == 3
    cert = valued_circulation(lo, hi, v, 4)
    assert isinstance(cert, PotentialCertificate)
    assert cert.violated_condition == "JJFB1"
    assert cert.b == 1
    assert set(cert.f.f) == {0}
    assert (cert.lhs, cert.rhs) == (3, 4)
    cert_lo = valued_circulation(lo, hi, v, -1)
    assert cert_lo.violated_condition == "JJFB2"
    assert (cert_lo.lhs, cert_lo.rhs) == (0, 1)


def test_valued_certificate_inequality_holds_elsewhere(abc):
    """Feasible instances satisfy all three tagged conditions for any f."""
    lo = SignedMeasure2.zero(abc)
    hi = m2(abc, {("a", "b"): 2, ("b", "c"): 2, ("c", "a"): 2})
    v = m2(abc, {("a", "b"): 1})
    alpha = valued_circulation(lo, hi, v, 1)
    assert is_circulation(alpha)
    rng = random.Random(5)
    from measureflow.verify import _potential_sides

    for _ in range(50):
        f = Potential(
            abc,
            [Fraction(rng.randint(-8, 8), rng.choice((1, 2, 4))) for _ in "abc"],
        )
        for b in (1, -1, 0):
            lhs, rhs = _potential_sides(lo, hi, v, Fraction(1), f, b)
            assert lhs >= rhs


def test_ergodic_path_counterexample(smt):
    psi = m2(smt, {("s", "m"): "1/2", ("m", "t"): "1/2"})
    cert = ergodic_circulation(psi)
    assert isinstance(cert, PotentialCertificate)
    assert cert.violated_condition == "ERG"
    assert cert.b == 1
    assert cert.f.as_dict() == {"s": 0, "m": 1, "t": 2}
    assert cert.lhs == 0
    assert cert.rhs == 1
    parts = [{"s"}, {"m"}, {"t"}]
    assert partition_condition(psi, parts) == 0


def test_ergodic_cycle_feasible(smt):
    psi = m2(smt, {("s", "m"): "1/2", ("m", "t"): "1/2", ("t", "s"): "1/2"})
    alpha = ergodic_circulation(psi)
    assert isinstance(alpha, SignedMeasure2)
    assert alpha.mass() == 1
    assert is_circulation(alpha)
    assert alpha.leq(psi)
    assert alpha.is_nonnegative()


def test_partition_condition_vs_certificates(smt):
    """Feasible iff every ordered partition scores >= 1."""
    psi_bad = m2(smt, {("s", "m"): "1/2", ("m", "t"): "1/2"})
    psi_ok = m2(smt, {("s", "m"): "1/2", ("m", "t"): "1/2", ("t", "s"): "1/2"})
    labels = list(smt.atoms)
    bad_scores = [
        partition_condition(psi_bad, p) for p in iter_ordered_partitions(labels)
    ]
    ok_scores = [
        partition_condition(psi_ok, p) for p in iter_ordered_partitions(labels)
    ]
    assert min(bad_scores) < 1
    assert min(ok_scores) >= 1
    with pytest.raises(PartitionInvalid):
        partition_condition(psi_ok, [{"s"}, {"m"}])
    with pytest.raises(PartitionInvalid):
        partition_condition(psi_ok, [{"s", "m"}, {"m", "t"}])


def test_integralize_potential_never_weakens(abc):
    rng = random.Random(9)
    for _ in range(40):
        phi, psi = random_bounds(abc, rng, density=0.6)
        v = SignedMeasure2(
            abc, [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        )
        f = Potential(
            abc,
            [Fraction(rng.randint(-12, 12), rng.choice((1, 2, 3, 4)))
             for _ in range(3)],
        )

        def deficit(fv):
            total = 0
            for i in range(3):
                for j in range(3):
                    t = fv[i] - fv[j] + v.w[i][j]
                    total += (psi.w[i][j] if t > 0 else phi.w[i][j]) * t
            return total

        g = integralize_potential(f, v, phi, psi)
        assert all(x == int(x) for x in g.f)
        assert deficit(g.f) <= deficit(f.f)


def test_valued_fast_path_zero_potential(abc):
    lo = SignedMeasure2.zero(abc)
    hi = m2(abc, {("a", "b"): 1})
    v = m2(abc, {("a", "b"): 1})
    cert = valued_circulation(lo, hi, v, 5)
    assert cert.violated_condition == "JJFB1"
    assert set(cert.f.f) == {0}
    assert cert.lhs == 1 and cert.rhs == 5


def test_valued_rejects_unordered_bounds(abc):
    hi = m2(abc, {("a", "b"): 1})
    lo = m2(abc, {("a", "b"): 2})
    with pytest.raises(BoundOrderViolation):
        valued_circulation(lo, hi, hi, 0)
