"""Acceptance suite: one test per criterion, exact tolerances as stated.

Run with `pytest tests/test_acceptance.py -v` to get one pass/fail line per
criterion. Every random suite uses a fixed seed; exact (rational) mode
everywhere except where a criterion names a float tolerance.
"""

import contextlib
import io
import pathlib
import random
import time
from fractions import Fraction

import pytest

from measureflow import (
    CutCertificate,
    MultiFlow,
    Potential,
    PotentialCertificate,
    Pseudometric,
    SignedMeasure2,
    decompose_paths,
    ergodic_circulation,
    feasible_circulation,
    from_circulation,
    gen_cyclic,
    hitting_stats,
    circulation_space_dim,
    integralize_potential,
    is_circulation,
    is_indecomposable,
    is_reversible,
    lp_oracle,
    marginals,
    partition_condition,
    parse_instance,
    search_noncut_instance,
    shortcut_check,
    solve_multicommodity,
    transship_min_cost,
    valued_circulation,
    volume_condition,
    walk_operators,
)
from measureflow.cli import main as cli_main
from measureflow.generators import (
    random_acyclic,
    random_bounds,
    random_circulation,
    random_fraction,
    random_measure2,
    random_pseudometric,
    random_walks,
    small_space,
    uniform_space,
)
from measureflow.oracle import encode_circulation, encode_multiflow
from measureflow.measures import AtomSpace, SignedMeasure1

GOLDEN = pathlib.Path(__file__).parent / "golden"


def report(num, label, detail):
    print(f"[criterion {num:02d}] {label}: PASS ({detail})")


def test_criterion_01_circulation_triple_checked():
    """500 random instances, n <= 6: solver verdict == full cut enumeration
    == independent LP oracle, all exact, under 30 seconds."""
    rng = random.Random(101)
    t0 = time.time()
    feasible_count = 0
    for k in range(500):
        n = 2 + k % 5
        space = small_space(n)
        density = 0.25 + 0.1 * (k % 4)
        phi, psi = random_bounds(space, rng, density=density, signed=k % 3 == 0)
        out = feasible_circulation(phi, psi)
        feasible = isinstance(out, SignedMeasure2)
        feasible_count += feasible

        cut_ok = True
        for mask in range(1, 2**n - 1):
            inside = [i for i in range(n) if mask >> i & 1]
            outside = [i for i in range(n) if not mask >> i & 1]
            if phi.rect(inside, outside) > psi.rect(outside, inside):
                cut_ok = False
                break
        assert cut_ok == feasible

        verdict = lp_oracle(encode_circulation(phi, psi))
        assert (verdict.status == "optimal") == feasible

        if feasible:
            assert phi.leq(out) and out.leq(psi) and is_circulation(out)
        else:
            x = [space.index(a) for a in out.set_X]
            xc = [i for i in range(n) if i not in set(x)]
            assert phi.rect(x, xc) == out.lhs
            assert psi.rect(xc, x) == out.rhs
            assert out.lhs > out.rhs
    elapsed = time.time() - t0
    assert elapsed < 30
    report(1, "circulation triple-check", f"500 instances, {feasible_count} feasible, {elapsed:.1f}s")


def test_criterion_02_path_counterexample_exact():
    """The 3-atom path admits no probability circulation; the certificate and
    the ordered-partition score are pinned exactly."""
    space = AtomSpace(("s", "m", "t"))
    psi = SignedMeasure2.from_dict(
        space, {("s", "m"): Fraction(1, 2), ("m", "t"): Fraction(1, 2)}
    )
    cert = ergodic_circulation(psi)
    assert isinstance(cert, PotentialCertificate)
    assert cert.violated_condition == "ERG"
    assert cert.b == 1
    assert cert.f.as_dict() == {"s": 0, "m": 1, "t": 2}
    assert cert.lhs == 0
    assert cert.rhs == 1
    # direct recomputation of psi(|F + 1|_+) with F(x,y) = f(x) - f(y)
    lhs = 0
    f = cert.f.f
    for i in range(3):
        for j in range(3):
            t = f[i] - f[j] + 1
            if t > 0:
                lhs += psi.w[i][j] * t
    assert lhs == 0
    assert partition_condition(psi, [{"s"}, {"m"}, {"t"}]) == 0
    report(2, "path counterexample", "certificate f=(0,1,2), lhs 0 < rhs 1, partition score 0")


def test_criterion_03_valued_certificates_and_witnesses():
    """200 random valued instances: certificates re-derived from scratch;
    witnesses satisfy all three tagged inequalities at 100 random potentials."""
    rng = random.Random(303)
    certs = 0
    for k in range(200):
        n = rng.randint(2, 5)
        space = small_space(n)
        v = random_measure2(space, rng, density=0.6, lo=-3, hi=3)
        if k % 4 == 0:
            # plant a circulation inside the bounds so its pairing is attainable
            mu = random_circulation(space, rng)
            slack = random_measure2(space, rng, density=0.5, lo=0, hi=2)
            phi, psi = mu - slack, mu + random_measure2(space, rng, density=0.5, lo=0, hi=2)
            c = mu.pairing(v)
        else:
            phi, psi = random_bounds(space, rng, density=0.5)
            c = random_fraction(rng, -4, 8)
        out = valued_circulation(phi, psi, v, c)
        if isinstance(out, PotentialCertificate):
            certs += 1
            f, b = out.f.f, out.b
            assert b in (-1, 0, 1)
            lhs = Fraction(0)
            low = Fraction(0)
            for i in range(n):
                for j in range(n):
                    t = f[i] - f[j] + b * v.w[i][j]
                    if t > 0:
                        lhs += psi.w[i][j] * t
                    elif t < 0:
                        low += phi.w[i][j] * (-t)
            rhs = low + b * c
            assert lhs < rhs
            assert out.lhs == lhs and out.rhs == rhs
        else:
            assert phi.leq(out) and out.leq(psi)
            assert is_circulation(out)
            assert out.pairing(v) == c
            for _ in range(100):
                f = [random_fraction(rng, -6, 12) for _ in range(n)]
                for b in (1, -1, 0):
                    lhs = Fraction(0)
                    low = Fraction(0)
                    for i in range(n):
                        for j in range(n):
                            t = f[i] - f[j] + b * v.w[i][j]
                            if t > 0:
                                lhs += psi.w[i][j] * t
                            elif t < 0:
                                low += phi.w[i][j] * (-t)
                    assert lhs >= low + b * c
    report(3, "valued circulations", f"200 instances, {certs} certified infeasible")


def test_criterion_04_integralization_identity():
    """100 random potentials: the floor-shift identity holds term by term and
    integralization never increases the deficit."""
    rng = random.Random(404)
    for _ in range(100):
        n = rng.randint(2, 5)
        space = small_space(n)
        phi, psi = random_bounds(space, rng, density=0.7)
        v = SignedMeasure2(
            space, [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        )
        f = [random_fraction(rng, -5, 10) for _ in range(n)]
        fhat = [Fraction(int(x // 1)) for x in f]
        ftil = [a - b for a, b in zip(f, fhat)]

        def sides(vals):
            hi = Fraction(0)
            lo = Fraction(0)
            for i in range(n):
                for j in range(n):
                    t = vals[i] - vals[j] + v.w[i][j]
                    if t > 0:
                        hi += psi.w[i][j] * t
                    elif t < 0:
                        lo += phi.w[i][j] * (-t)
            return hi - lo

        lhs_full = sides(f)
        lhs_floor = sides(fhat)
        corr = Fraction(0)
        for i in range(n):
            for j in range(n):
                t = f[i] - f[j] + v.w[i][j]
                ft = ftil[i] - ftil[j]
                if t > 0:
                    corr += psi.w[i][j] * ft
                elif t < 0:
                    corr += phi.w[i][j] * ft
        assert lhs_full == lhs_floor + corr

        g = integralize_potential(Potential(space, f), v, phi, psi)
        assert all(x == int(x) for x in g.f)
        assert sides(g.f) <= lhs_full
    report(4, "integralization", "100 potentials, identity exact, deficit monotone")


def test_criterion_05_decomposition_reproduces_measure():
    """200 random acyclic measures, n <= 7: E(decompose(phi)) == phi exactly
    and the endpoint measure balances the boundary marginals."""
    rng = random.Random(505)
    done = 0
    while done < 200:
        n = rng.randint(2, 7)
        space = small_space(n)
        phi = random_acyclic(space, rng, density=0.55)
        if phi.mass() == 0:
            continue
        tau = decompose_paths(phi)
        _, E, Z = walk_operators(tau)
        assert E == phi
        e1, e2 = marginals(E)
        z1, z2 = marginals(Z)
        assert e1 - e2 == z1 - z2
        done += 1
    report(5, "path decomposition", "200 acyclic measures reproduced exactly")


def test_criterion_06_shortcut_inequality():
    """1000 random (pseudometric, walk family) pairs: the endpoint distance
    never exceeds the traversed distance beyond 1e-12."""
    rng = random.Random(606)
    for _ in range(1000):
        n = rng.randint(2, 6)
        space = small_space(n)
        D = random_pseudometric(space, rng)
        tau = random_walks(space, rng, count=rng.randint(1, 5))
        lhs, rhs = shortcut_check(D, tau)
        assert lhs >= rhs - Fraction(1, 10**12)
    report(6, "walk shortcutting", "1000 pairs, tolerance 1e-12")


def test_criterion_07_transport_duality():
    """200 random balanced transport instances: dual value equals primal cost
    exactly and the duals are feasible everywhere."""
    rng = random.Random(707)
    done = 0
    while done < 200:
        n = rng.randint(2, 5)
        space = small_space(n)
        alpha_w = [random_fraction(rng, 0, 4) for _ in range(n)]
        beta_w = [random_fraction(rng, 0, 4) for _ in range(n)]
        ta, tb = sum(alpha_w), sum(beta_w)
        if tb == 0 or ta == 0:
            continue
        beta_w = [x * ta / tb for x in beta_w]
        alpha = SignedMeasure1(space, alpha_w)
        beta = SignedMeasure1(space, beta_w)
        cost = SignedMeasure2(
            space,
            [[random_fraction(rng, 0, 6) for _ in range(n)] for _ in range(n)],
        )
        mu, total, dual = transship_min_cost(alpha, beta, cost)
        assert dual.value == total
        assert mu.pairing(cost) == total
        first, second = marginals(mu)
        assert first == alpha and second == beta
        for i in range(n):
            for j in range(n):
                assert dual.g.f[i] + dual.h.f[j] <= cost.w[i][j]
        done += 1
    report(7, "transport duality", "200 instances, primal == dual exact")


def test_criterion_08_multiflow_oracle_and_discovery():
    """Multicommodity verdicts agree with the LP oracle on random small
    instances, and the randomized search finds a cut-passing infeasible
    instance within the trial budget in under five minutes."""
    t0 = time.time()
    rng = random.Random(808)
    agree = 0
    for k in range(60):
        n = rng.randint(3, 5)
        space = small_space(n)
        pool = [(i, j) for i in range(n) for j in range(i + 1, n)]
        rng.shuffle(pool)
        sig = {}
        for i, j in pool[: rng.randint(1, 4)]:
            w = Fraction(rng.randint(1, 4), 2)
            sig[(space.atoms[i], space.atoms[j])] = w
            sig[(space.atoms[j], space.atoms[i])] = w
        cap = {}
        for i, j in pool:
            if rng.random() < 0.7:
                w = Fraction(rng.randint(0, 4), 2)
                cap[(space.atoms[i], space.atoms[j])] = w
                cap[(space.atoms[j], space.atoms[i])] = w
        sigma = SignedMeasure2.from_dict(space, sig)
        psi = SignedMeasure2.from_dict(space, cap)
        out = solve_multicommodity(sigma, psi)
        verdict = lp_oracle(encode_multiflow(sigma, psi))
        assert verdict.status == "optimal"
        if isinstance(out, MultiFlow):
            assert verdict.optimum == 0
            assert out.overload(psi) == 0
        else:
            assert verdict.optimum > 0
            dv, cv = volume_condition(sigma, psi, out)
            assert dv > cv
        agree += 1
    assert agree == 60

    space = uniform_space(5, prefix="w")
    found = search_noncut_instance(space, budget=100000, seed=20240, max_pairs=4)
    assert found is not None
    sigma, psi, cert, tries = found
    assert tries <= 100000
    dv, cv = volume_condition(sigma, psi, cert)
    assert dv > cv
    n = space.n
    for mask in range(1, 2 ** (n - 1)):
        part = [space.atoms[i] for i in range(n) if mask >> i & 1]
        cut = Pseudometric.cut(space, part)
        cdv, ccv = volume_condition(sigma, psi, cut)
        assert cdv <= ccv
    out = solve_multicommodity(sigma, psi)
    assert isinstance(out, Pseudometric)
    elapsed = time.time() - t0
    assert elapsed < 300
    report(8, "multicommodity", f"60 oracle agreements; noncut instance after {tries} tries, {elapsed:.1f}s")


def test_criterion_09_cyclic_chains():
    """Generated q-cycles, q = 2..8: indecomposable, non-reversible beyond
    q = 2, one-dimensional circulation space, and every target is hit within
    50n steps with empirical frequency at least 0.99."""
    for q in range(2, 9):
        space, eta = gen_cyclic(q)
        ms = from_circulation(eta)
        assert is_indecomposable(ms) is True
        assert circulation_space_dim(eta) == 1
        if q >= 3:
            assert not is_reversible(ms)
        target = space.atoms[q - 1]
        frac = hitting_stats(
            ms, space.atoms[0], [target], max_steps=50 * q, trials=100, seed=909 + q
        )
        assert frac >= Fraction(99, 100)

    rng = random.Random(911)
    for trial in range(10):
        n = rng.randint(3, 6)
        space = small_space(n)
        order = list(range(n))
        rng.shuffle(order)
        w = [[Fraction(0)] * n for _ in range(n)]
        wt = random_fraction(rng, 0, 3) + Fraction(1, 2)
        for a, b in zip(order, order[1:] + [order[0]]):
            w[a][b] += wt
        eta = SignedMeasure2(space, w) + random_circulation(space, rng)
        eta = eta.scale(Fraction(1) / eta.mass())
        ms = from_circulation(eta)
        assert is_indecomposable(ms) is True
        start, target = rng.sample(space.atoms, 2)
        frac = hitting_stats(
            ms, start, [target], max_steps=50 * n, trials=200, seed=1000 + trial
        )
        assert frac >= Fraction(99, 100)
    report(9, "cyclic chains", "q=2..8 and 10 random chains, hitting >= 0.99")


def test_criterion_10_cli_golden_suite():
    """Every golden instance runs through the CLI with exit code 0 or 1,
    reports a passing verification, and matches its stored output byte for
    byte; oracle cross-checks agree; exit code 3 never occurs."""
    oracle_ops = {
        "circulation", "valued-circulation", "ergodic", "maxflow",
        "supply-demand", "mincost-flow", "transship", "transship-cost",
        "strassen", "multiflow",
    }
    files = sorted(GOLDEN.glob("*.mfi"))
    assert files, "golden corpus missing"
    ran = 0
    for path in files:
        op = parse_instance(path.read_text()).problem[0]
        expected = path.with_suffix(".out").read_text()
        want = 1 if "verdict: infeasible" in expected else 0
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli_main([op, str(path)])
        assert code == want
        assert code != 3
        assert buf.getvalue() == expected
        assert "verification: pass" in buf.getvalue()
        if op in oracle_ops:
            buf = io.StringIO()
            with contextlib.redirect_stdout(buf):
                code = cli_main([op, str(path), "--oracle"])
            assert code == want
            assert code != 3
            assert "oracle: agree" in buf.getvalue()
        ran += 1
    report(10, "cli golden suite", f"{ran} instances, zero verification failures")
