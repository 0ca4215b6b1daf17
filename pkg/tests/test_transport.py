import random
from fractions import Fraction

import pytest

from measureflow import (
    CutCertificate,
    MassMismatch,
    NotProbability,
    PotentialCertificate,
    RectangleCertificate,
    SameEndpoints,
    SignedMeasure1,
    SignedMeasure2,
    marginals,
    max_flow,
    min_cost_flow,
    strassen_coupling,
    supply_demand_flow,
    transship_feasible,
    transship_min_cost,
)
from measureflow.generators import random_fraction, small_space
from conftest import m1, m2


def test_max_flow_value_and_cut(smt):
    psi = m2(smt, {("s", "m"): 2, ("m", "t"): 1, ("s", "t"): "1/2"})
    flow, value, cut = max_flow(psi, "s", "t")
    assert value == Fraction(3, 2)
    assert cut == frozenset({"s", "m"})
    first, second = marginals(flow)
    assert first["s"] - second["s"] == value
    assert second["t"] - first["t"] == value
    assert flow.leq(psi)


def test_max_flow_same_endpoints(smt):
    psi = m2(smt, {("s", "m"): 1})
    with pytest.raises(SameEndpoints):
        max_flow(psi, "s", "s")


def test_max_flow_disconnected(smt):
    psi = m2(smt, {("m", "s"): 1})
    flow, value, cut = max_flow(psi, "s", "t")
    assert value == 0
    assert flow.mass() == 0


def test_supply_demand_feasible(smt):
    psi = m2(smt, {("s", "m"): 2, ("m", "t"): 1})
    sigma = m1(smt, {"s": 1})
    tau = m1(smt, {"t": 1})
    flow = supply_demand_flow(psi, sigma, tau)
    assert isinstance(flow, SignedMeasure2)
    first, second = marginals(flow)
    assert (first - second).as_dict() == {"s": 1, "t": -1}


def test_supply_demand_cut(smt):
    psi = m2(smt, {("s", "m"): "1/4", ("m", "t"): 1})
    sigma = m1(smt, {"s": 1})
    tau = m1(smt, {"t": 1})
    cert = supply_demand_flow(psi, sigma, tau)
    assert isinstance(cert, CutCertificate)
    assert "s" in cert.set_X and "t" not in cert.set_X
    assert cert.lhs > cert.rhs


def test_supply_demand_mass_mismatch(smt):
    psi = m2(smt, {("s", "t"): 5})
    with pytest.raises(MassMismatch):
        supply_demand_flow(psi, m1(smt, {"s": 2}), m1(smt, {"t": 1}))


def test_min_cost_flow_hits_target(smt):
    psi = m2(smt, {("s", "m"): 2, ("m", "t"): 1, ("s", "t"): 1})
    sigma = m1(smt, {"s": 1})
    tau = m1(smt, {"t": 1})
    v = m2(smt, {("s", "m"): 1, ("m", "t"): 1, ("s", "t"): 3})
    flow = min_cost_flow(psi, sigma, tau, v, 2)
    assert isinstance(flow, SignedMeasure2)
    assert flow.pairing(v) == 2
    first, second = marginals(flow)
    assert (first - second).as_dict() == {"s": 1, "t": -1}


def test_min_cost_flow_certificate(smt):
    psi = m2(smt, {("s", "m"): 2, ("m", "t"): 1, ("s", "t"): 1})
    sigma = m1(smt, {"s": 1})
    tau = m1(smt, {"t": 1})
    v = m2(smt, {("s", "m"): 1, ("m", "t"): 1, ("s", "t"): 3})
    cert = min_cost_flow(psi, sigma, tau, v, 1)
    assert isinstance(cert, PotentialCertificate)
    assert cert.violated_condition == "MINCOST"
    assert cert.lhs < cert.rhs


def test_transship_feasible_and_rect(ab):
    psi = m2(ab, {("a", "b"): 1})
    alpha = m1(ab, {"a": 1})
    beta = m1(ab, {"b": 1})
    mu = transship_feasible(psi, alpha, beta)
    assert isinstance(mu, SignedMeasure2)
    assert mu[("a", "b")] == 1
    blocked = transship_feasible(SignedMeasure2.zero(ab), alpha, beta)
    assert isinstance(blocked, RectangleCertificate)
    assert blocked.lhs < blocked.rhs


def test_transship_min_cost_duals(ab):
    alpha = m1(ab, {"a": 1})
    beta = m1(ab, {"b": 1})
    cost = m2(ab, {("a", "b"): 1})
    mu, total, dual = transship_min_cost(alpha, beta, cost)
    assert total == 1
    assert mu[("a", "b")] == 1
    assert dual.value == total
    # dual feasibility g(x) + h(y) <= c(x,y) on every pair
    for i in range(2):
        for j in range(2):
            assert dual.g.f[i] + dual.h.f[j] <= cost.w[i][j]


def test_transship_min_cost_random_strong_duality():
    rng = random.Random(77)
    for _ in range(25):
        space = small_space(rng.randint(2, 4))
        n = space.n
        alpha_w = [random_fraction(rng, 0, 4) for _ in range(n)]
        beta_w = [random_fraction(rng, 0, 4) for _ in range(n)]
        total_a, total_b = sum(alpha_w), sum(beta_w)
        if total_b == 0:
            continue
        beta_w = [x * total_a / total_b for x in beta_w]
        alpha = SignedMeasure1(space, alpha_w)
        beta = SignedMeasure1(space, beta_w)
        cost = SignedMeasure2(
            space,
            [[random_fraction(rng, 0, 5) for _ in range(n)] for _ in range(n)],
        )
        mu, total, dual = transship_min_cost(alpha, beta, cost)
        assert dual.value == total
        first, second = marginals(mu)
        assert first == alpha and second == beta
        for i in range(n):
            for j in range(n):
                assert dual.g.f[i] + dual.h.f[j] <= cost.w[i][j]


def test_strassen_diagonal_coupling(ab):
    half = Fraction(1, 2)
    alpha = m1(ab, {"a": half, "b": half})
    allowed = m2(ab, {("a", "a"): 1, ("b", "b"): 1})
    mu = strassen_coupling(alpha, alpha, allowed)
    assert isinstance(mu, SignedMeasure2)
    assert mu[("a", "a")] == half and mu[("b", "b")] == half


def test_strassen_blocked_rectangle(ab):
    half = Fraction(1, 2)
    alpha = m1(ab, {"a": half, "b": half})
    beta = m1(ab, {"b": 1})
    allowed = m2(ab, {("a", "a"): 1, ("b", "b"): 1})
    cert = strassen_coupling(alpha, beta, allowed)
    assert isinstance(cert, RectangleCertificate)
    assert cert.lhs > cert.rhs == 1
    # the rectangle misses the allowed set entirely
    for s_label in cert.set_S:
        for t_label in cert.set_T:
            assert allowed[(s_label, t_label)] == 0


def test_strassen_requires_probability(ab):
    alpha = m1(ab, {"a": 2})
    with pytest.raises(NotProbability):
        strassen_coupling(alpha, alpha, m2(ab, {("a", "a"): 1}))


def test_strassen_accepts_label_pairs(ab):
    half = Fraction(1, 2)
    alpha = m1(ab, {"a": half, "b": half})
    mu = strassen_coupling(alpha, alpha, [("a", "a"), ("b", "b")])
    assert isinstance(mu, SignedMeasure2)
