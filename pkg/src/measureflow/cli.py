"""Command-line front end.

Each solver subcommand reads one instance file, dispatches to the library,
re-verifies the witness or certificate with measure primitives only, and
prints a canonical report. Exit codes: 0 solved/feasible, 1 certified
infeasible, 2 usage or parse error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import sys

from . import flows, generators, markov, multiflow, oracle, paths, verify
from .certificates import (
    CutCertificate,
    PotentialCertificate,
    RectangleCertificate,
)
from .errors import MeasureFlowError, ParseError, VerificationFailure
from .instance import InstanceFile, ResultReport, emit_instance, emit_report, parse_instance
from .measures import (
    SignedMeasure1,
    SignedMeasure2,
    is_circulation,
    marginals,
    tv_norm,
)
from .multiflow import MultiFlow
from .numeric import format_number, parse_number


class Usage(Exception):
    pass


def _resolve(inst, args, key, kinds, what=None):
    name = args.get(key)
    if name is None:
        raise Usage(f"problem stanza is missing {key!r}")
    if not isinstance(name, str):
        raise Usage(f"argument {key!r} must name a declared object")
    pools = {
        "measure2": inst.measures2,
        "cost": inst.costs,
        "metric": inst.metrics,
        "measure1": inst.measures1,
        "potential": inst.potentials,
    }
    for kind in kinds:
        if name in pools[kind]:
            return pools[kind][name]
    raise Usage(f"{what or key} {name!r} is not declared")


def _number(args, key):
    val = args.get(key)
    if val is None:
        raise Usage(f"problem stanza is missing {key!r}")
    if isinstance(val, (str, tuple)):
        raise Usage(f"argument {key!r} must be a number")
    return val


def _label(inst, args, key):
    val = args.get(key)
    if not isinstance(val, str):
        raise Usage(f"argument {key!r} must be an atom label")
    try:
        inst.space.index(val)
    except KeyError:
        raise Usage(f"unknown atom {val!r}") from None
    return val


def _mode_tol(ns, *sources):
    return flows._setup(ns.mode, ns.tol, *sources)


def _report(ns, problem, verdict, mode, tol, **kw):
    return ResultReport(problem=problem, verdict=verdict, mode=mode,
                        tol=tol, **kw)


def _add_cut(report, cert: CutCertificate):
    report.add_set("set_X", cert.set_X)
    report.add_line("lhs", format_number(cert.lhs))
    report.add_line("rhs", format_number(cert.rhs))


def _add_rect(report, cert: RectangleCertificate):
    report.add_set("set_S", cert.set_S)
    report.add_set("set_T", cert.set_T)
    report.add_line("lhs", format_number(cert.lhs))
    report.add_line("rhs", format_number(cert.rhs))


def _add_potential_cert(report, cert: PotentialCertificate):
    report.add_potential("certificate", cert.f)
    report.add_line("b", cert.b)
    report.add_line("condition", cert.violated_condition)
    report.add_line("lhs", format_number(cert.lhs))
    report.add_line("rhs", format_number(cert.rhs))


def _oracle_feasibility(prob, feasible, report):
    verdict = oracle.lp_oracle(prob)
    ok = (verdict.status == "optimal") == feasible
    report.oracle = "agree" if ok else "disagree"
    if not ok:
        raise VerificationFailure(
            f"oracle says {verdict.status}, solver says "
            f"{'feasible' if feasible else 'infeasible'}"
        )


def _run_circulation(inst, args, ns):
    phi = _resolve(inst, args, "lower", ("measure2", "cost"))
    psi = _resolve(inst, args, "upper", ("measure2", "cost"))
    mode, tol = _mode_tol(ns, phi, psi)
    out = flows.feasible_circulation(phi, psi, ns.mode, ns.tol)
    feasible = isinstance(out, SignedMeasure2)
    report = _report(ns, "circulation",
                     "feasible" if feasible else "infeasible", mode, tol)
    if feasible:
        verify.verify_bounds(phi, psi, out, tol)
        verify.verify_circulation_witness(phi, psi, out, tol)
        report.add_measure2("witness", out)
    else:
        verify.verify_hoffman_cut(phi, psi, out, tol)
        _add_cut(report, out)
    if ns.oracle:
        _oracle_feasibility(oracle.encode_circulation(phi, psi), feasible, report)
    return (0 if feasible else 1), report


def _run_valued(inst, args, ns):
    phi = _resolve(inst, args, "lower", ("measure2", "cost"))
    psi = _resolve(inst, args, "upper", ("measure2", "cost"))
    v = _resolve(inst, args, "values", ("cost", "measure2"))
    cval = _number(args, "value")
    mode, tol = _mode_tol(ns, phi, psi, v, [cval])
    out = flows.valued_circulation(phi, psi, v, cval, ns.mode, ns.tol)
    feasible = isinstance(out, SignedMeasure2)
    report = _report(ns, "valued-circulation",
                     "feasible" if feasible else "infeasible", mode, tol)
    if feasible:
        verify.verify_valued_witness(phi, psi, v, cval, out, tol)
        report.add_measure2("witness", out)
    else:
        verify.verify_potential_cert(phi, psi, v, cval, out, tol)
        _add_potential_cert(report, out)
    if ns.oracle:
        _oracle_feasibility(oracle.encode_valued(phi, psi, v, cval),
                            feasible, report)
    return (0 if feasible else 1), report


def _run_ergodic(inst, args, ns):
    psi = _resolve(inst, args, "upper", ("measure2", "cost"))
    mode, tol = _mode_tol(ns, psi)
    out = flows.ergodic_circulation(psi, ns.mode, ns.tol)
    feasible = isinstance(out, SignedMeasure2)
    report = _report(ns, "ergodic",
                     "feasible" if feasible else "infeasible", mode, tol)
    zero = SignedMeasure2.zero(psi.space)
    ones = SignedMeasure2.constant(psi.space, 1)
    if feasible:
        verify.verify_valued_witness(zero, psi, ones, 1, out, tol)
        report.add_measure2("witness", out)
    else:
        verify.verify_potential_cert(zero, psi, ones, 1, out, tol)
        _add_potential_cert(report, out)
    if ns.oracle:
        _oracle_feasibility(oracle.encode_ergodic(psi), feasible, report)
    return (0 if feasible else 1), report


def _run_maxflow(inst, args, ns):
    psi = _resolve(inst, args, "capacity", ("measure2", "cost"))
    s = _label(inst, args, "source")
    t = _label(inst, args, "sink")
    mode, tol = _mode_tol(ns, psi)
    flow, value, cut = flows.max_flow(psi, s, t, ns.mode, ns.tol)
    verify.verify_maxflow_witness(psi, s, t, flow, value, cut, tol)
    report = _report(ns, "maxflow", "value", mode, tol, value=value)
    report.add_measure2("witness", flow)
    report.add_set("cut", cut)
    if ns.oracle:
        verdict = oracle.lp_oracle(oracle.encode_maxflow(psi, s, t))
        agree = (verdict.status == "optimal"
                 and abs(-verdict.optimum - value) <= max(tol, 1e-9))
        report.oracle = "agree" if agree else "disagree"
        if not agree:
            raise VerificationFailure("oracle max-flow value disagrees")
    return 0, report


def _run_supply_demand(inst, args, ns):
    psi = _resolve(inst, args, "capacity", ("measure2", "cost"))
    sigma = _resolve(inst, args, "supply", ("measure1",))
    tau = _resolve(inst, args, "demand", ("measure1",))
    mode, tol = _mode_tol(ns, psi, sigma, tau)
    out = flows.supply_demand_flow(psi, sigma, tau, ns.mode, ns.tol)
    feasible = isinstance(out, SignedMeasure2)
    report = _report(ns, "supply-demand",
                     "feasible" if feasible else "infeasible", mode, tol)
    if feasible:
        verify.verify_flow_witness(psi, sigma, tau, out, tol)
        report.add_measure2("witness", out)
    else:
        verify.verify_supply_demand_cut(psi, sigma, tau, out, tol)
        _add_cut(report, out)
    if ns.oracle:
        _oracle_feasibility(oracle.encode_supply_demand(psi, sigma, tau),
                            feasible, report)
    return (0 if feasible else 1), report


def _run_mincost(inst, args, ns):
    psi = _resolve(inst, args, "capacity", ("measure2", "cost"))
    sigma = _resolve(inst, args, "supply", ("measure1",))
    tau = _resolve(inst, args, "demand", ("measure1",))
    v = _resolve(inst, args, "cost", ("cost", "measure2"))
    target = _number(args, "target")
    mode, tol = _mode_tol(ns, psi, sigma, tau, v, [target])
    out = flows.min_cost_flow(psi, sigma, tau, v, target, ns.mode, ns.tol)
    feasible = isinstance(out, SignedMeasure2)
    report = _report(ns, "mincost-flow",
                     "feasible" if feasible else "infeasible", mode, tol)
    if feasible:
        verify.verify_mincost_witness(psi, sigma, tau, v, target, out, tol)
        report.add_measure2("witness", out)
    else:
        verify.verify_mincost_cert(psi, sigma, tau, v, target, out, tol)
        _add_potential_cert(report, out)
    if ns.oracle:
        _oracle_feasibility(oracle.encode_mincost(psi, sigma, tau, v, target),
                            feasible, report)
    return (0 if feasible else 1), report


def _run_transship(inst, args, ns):
    psi = _resolve(inst, args, "capacity", ("measure2", "cost"))
    alpha = _resolve(inst, args, "left", ("measure1",))
    beta = _resolve(inst, args, "right", ("measure1",))
    mode, tol = _mode_tol(ns, psi, alpha, beta)
    out = flows.transship_feasible(psi, alpha, beta, ns.mode, ns.tol)
    feasible = isinstance(out, SignedMeasure2)
    report = _report(ns, "transship",
                     "feasible" if feasible else "infeasible", mode, tol)
    if feasible:
        verify.verify_coupling_witness(psi, alpha, beta, out, tol)
        report.add_measure2("witness", out)
    else:
        verify.verify_transship_rect(psi, alpha, beta, out, tol)
        _add_rect(report, out)
    if ns.oracle:
        _oracle_feasibility(oracle.encode_transship(psi, alpha, beta),
                            feasible, report)
    return (0 if feasible else 1), report


def _run_transship_cost(inst, args, ns):
    alpha = _resolve(inst, args, "left", ("measure1",))
    beta = _resolve(inst, args, "right", ("measure1",))
    cost = _resolve(inst, args, "cost", ("cost", "measure2"))
    mode, tol = _mode_tol(ns, alpha, beta, cost)
    mu, total, dual = flows.transship_min_cost(alpha, beta, cost, ns.mode, ns.tol)
    verify.verify_coupling_witness(
        SignedMeasure2.constant(alpha.space, alpha.mass()), alpha, beta, mu, tol
    )
    verify.verify_dual_pair(alpha, beta, cost, dual, total, tol)
    report = _report(ns, "transship-cost", "value", mode, tol, value=total)
    report.add_measure2("witness", mu)
    report.add_potential("dual_g", dual.g)
    report.add_potential("dual_h", dual.h)
    report.add_line("dual_value", format_number(dual.value))
    if ns.oracle:
        verdict = oracle.lp_oracle(oracle.encode_transship_cost(alpha, beta, cost))
        agree = (verdict.status == "optimal"
                 and abs(verdict.optimum - total) <= max(tol, 1e-9))
        report.oracle = "agree" if agree else "disagree"
        if not agree:
            raise VerificationFailure("oracle transshipment optimum disagrees")
    return 0, report


def _run_strassen(inst, args, ns):
    alpha = _resolve(inst, args, "left", ("measure1",))
    beta = _resolve(inst, args, "right", ("measure1",))
    allowed = _resolve(inst, args, "pairs", ("measure2", "cost"))
    mode, tol = _mode_tol(ns, alpha, beta)
    out = flows.strassen_coupling(alpha, beta, allowed, ns.mode, ns.tol)
    feasible = isinstance(out, SignedMeasure2)
    pair_set = flows._pair_index_set(alpha.space, allowed)
    report = _report(ns, "strassen",
                     "feasible" if feasible else "infeasible", mode, tol)
    if feasible:
        verify.verify_strassen_witness(pair_set, alpha, beta, out, tol)
        report.add_measure2("witness", out)
    else:
        verify.verify_strassen_rect(pair_set, alpha, beta, out, tol)
        _add_rect(report, out)
    if ns.oracle:
        _oracle_feasibility(oracle.encode_strassen(alpha, beta, allowed),
                            feasible, report)
    return (0 if feasible else 1), report


def _run_decompose(inst, args, ns):
    phi = _resolve(inst, args, "measure", ("measure2", "cost"))
    mode, tol = _mode_tol(ns, phi)
    cycle = paths.is_acyclic(phi, tol)
    if cycle is not True:
        # re-verify: a circulation inside the support, under phi
        if not cycle.is_nonnegative(tol) or not is_circulation(cycle, tol):
            raise VerificationFailure("cycle witness is not a circulation")
        for i, j in cycle.support():
            if not phi.w[i][j] >= cycle.w[i][j]:
                raise VerificationFailure("cycle witness exceeds the measure")
        report = _report(ns, "decompose", "infeasible", mode, tol)
        report.add_measure2("cycle", cycle)
        return 1, report
    tau = paths.decompose_paths(phi, tol)
    _, E, Z = paths.walk_operators(tau)
    if tv_norm(E - phi) > tol:
        raise VerificationFailure("edge counts do not reproduce the measure")
    e1, e2 = marginals(E)
    z1, z2 = marginals(Z)
    if tv_norm((e1 - e2) - (z1 - z2)) > tol:
        raise VerificationFailure("endpoint and edge divergences disagree")
    report = _report(ns, "decompose", "feasible", mode, tol)
    report.add_walks("walks", tau)
    report.add_measure2("endpoints", Z)
    return 0, report


def _run_markov_sim(inst, args, ns):
    eta = _resolve(inst, args, "chain", ("measure2",))
    steps = int(_number(args, "steps"))
    mode, tol = _mode_tol(ns, eta)
    ms = markov.from_circulation(eta, ns.tol)
    start_name = args.get("start")
    if isinstance(start_name, str) and start_name in inst.measures1:
        start = inst.measures1[start_name]
    else:
        label = _label(inst, args, "start")
        start = SignedMeasure1.point_mass(eta.space, label, 1)
    seed = ns.seed if ns.seed is not None else 0
    walk = markov.simulate_walk(ms, start, steps, seed, ns.tol)
    # re-verify: every transition is carried by eta or is a null self-loop
    for u, v in zip(walk, walk[1:]):
        ui, vi = eta.space.index(u), eta.space.index(v)
        if eta.w[ui][vi] > tol:
            continue
        if u == v and not ms.pi.w[ui] > tol:
            continue
        raise VerificationFailure(f"transition {u}->{v} has no mass")
    report = _report(ns, "markov-sim", "feasible", mode, tol, seed=seed)
    report.add_line("walk", ">".join(walk))
    report.add_measure1("stationary", ms.pi)
    return 0, report


def _run_multiflow(inst, args, ns):
    sigma = _resolve(inst, args, "demand", ("measure2",))
    psi = _resolve(inst, args, "capacity", ("measure2", "cost"))
    eps = parse_number(ns.epsilon) if ns.epsilon is not None else 0
    mode, tol = _mode_tol(ns, sigma, psi, [eps])
    out = multiflow.solve_multicommodity(sigma, psi, eps, ns.mode, ns.tol)
    feasible = isinstance(out, MultiFlow)
    report = _report(ns, "multiflow",
                     "feasible" if feasible else "infeasible", mode, tol)
    if feasible:
        multiflow._verify_multiflow(out, psi, flows._num(eps, mode), tol)
        report.add_measure2("load", out.total_load)
        report.add_line("overload", format_number(out.overload(psi)))
        for (s, t) in sorted(out.flows):
            if sigma.space.index(s) < sigma.space.index(t):
                report.add_measure2(f"flow_{s}_{t}", out.flows[(s, t)])
    else:
        multiflow._verify_metric_cert(sigma, psi, out)
        lhs, rhs = multiflow.volume_condition(sigma, psi, out, tol)
        report.add_metric("certificate", out)
        report.add_line("demand_volume", format_number(lhs))
        report.add_line("capacity_volume", format_number(rhs))
    if ns.oracle:
        verdict = oracle.lp_oracle(oracle.encode_multiflow(sigma, psi))
        ok = (verdict.status == "optimal"
              and (verdict.optimum <= flows._num(eps, "rational") + tol) == feasible)
        report.oracle = "agree" if ok else "disagree"
        if not ok:
            raise VerificationFailure("oracle overload optimum disagrees")
    return (0 if feasible else 1), report


_ORACLE_ENCODERS = {
    "circulation": lambda inst, args, ns: oracle.encode_circulation(
        _resolve(inst, args, "lower", ("measure2", "cost")),
        _resolve(inst, args, "upper", ("measure2", "cost"))),
    "valued-circulation": lambda inst, args, ns: oracle.encode_valued(
        _resolve(inst, args, "lower", ("measure2", "cost")),
        _resolve(inst, args, "upper", ("measure2", "cost")),
        _resolve(inst, args, "values", ("cost", "measure2")),
        _number(args, "value")),
    "ergodic": lambda inst, args, ns: oracle.encode_ergodic(
        _resolve(inst, args, "upper", ("measure2", "cost"))),
    "maxflow": lambda inst, args, ns: oracle.encode_maxflow(
        _resolve(inst, args, "capacity", ("measure2", "cost")),
        _label(inst, args, "source"), _label(inst, args, "sink")),
    "supply-demand": lambda inst, args, ns: oracle.encode_supply_demand(
        _resolve(inst, args, "capacity", ("measure2", "cost")),
        _resolve(inst, args, "supply", ("measure1",)),
        _resolve(inst, args, "demand", ("measure1",))),
    "mincost-flow": lambda inst, args, ns: oracle.encode_mincost(
        _resolve(inst, args, "capacity", ("measure2", "cost")),
        _resolve(inst, args, "supply", ("measure1",)),
        _resolve(inst, args, "demand", ("measure1",)),
        _resolve(inst, args, "cost", ("cost", "measure2")),
        _number(args, "target")),
    "transship": lambda inst, args, ns: oracle.encode_transship(
        _resolve(inst, args, "capacity", ("measure2", "cost")),
        _resolve(inst, args, "left", ("measure1",)),
        _resolve(inst, args, "right", ("measure1",))),
    "transship-cost": lambda inst, args, ns: oracle.encode_transship_cost(
        _resolve(inst, args, "left", ("measure1",)),
        _resolve(inst, args, "right", ("measure1",)),
        _resolve(inst, args, "cost", ("cost", "measure2"))),
    "strassen": lambda inst, args, ns: oracle.encode_strassen(
        _resolve(inst, args, "left", ("measure1",)),
        _resolve(inst, args, "right", ("measure1",)),
        _resolve(inst, args, "pairs", ("measure2", "cost"))),
    "multiflow": lambda inst, args, ns: oracle.encode_multiflow(
        _resolve(inst, args, "demand", ("measure2",)),
        _resolve(inst, args, "capacity", ("measure2", "cost"))),
}


def _run_oracle(inst, args, ns, op):
    if op not in _ORACLE_ENCODERS:
        raise Usage(f"problem {op!r} has no oracle encoding")
    prob = _ORACLE_ENCODERS[op](inst, args, ns)
    verdict = oracle.lp_oracle(prob)
    feasible = verdict.status == "optimal"
    report = _report(ns, f"oracle({op})",
                     "feasible" if feasible else "infeasible",
                     "rational", 0)
    report.add_line("status", verdict.status)
    if verdict.optimum is not None:
        report.add_line("optimum", format_number(verdict.optimum))
    return (0 if feasible else 1), report


_HANDLERS = {
    "circulation": _run_circulation,
    "valued-circulation": _run_valued,
    "ergodic": _run_ergodic,
    "maxflow": _run_maxflow,
    "supply-demand": _run_supply_demand,
    "mincost-flow": _run_mincost,
    "transship": _run_transship,
    "transship-cost": _run_transship_cost,
    "strassen": _run_strassen,
    "decompose": _run_decompose,
    "markov-sim": _run_markov_sim,
    "multiflow": _run_multiflow,
}


def _gen(ns):
    if ns.kind == "cyclic":
        space, eta = generators.gen_cyclic(int(ns.arg1))
        inst = InstanceFile(space)
        inst.measures2["eta"] = eta
        inst.problem = ("ergodic", {"upper": "eta"})
    elif ns.kind == "graphon":
        if ns.arg2 is None:
            raise Usage("gen graphon needs a density spec and a cell count")
        W = generators.graphon_from_spec(ns.arg1)
        space, eta = generators.gen_graphon(W, int(ns.arg2))
        inst = InstanceFile(space)
        inst.measures2["eta"] = eta
        inst.measures2["zero"] = SignedMeasure2.zero(space)
        inst.problem = ("circulation", {"lower": "zero", "upper": "eta"})
    else:
        raise Usage(f"unknown generator {ns.kind!r}")
    sys.stdout.write(emit_instance(inst))
    return 0


def _build_parser():
    top = argparse.ArgumentParser(
        prog="measureflow",
        description="certified flow problems on finite measure spaces",
    )
    sub = top.add_subparsers(dest="command", required=True)
    for name in list(_HANDLERS) + ["oracle"]:
        p = sub.add_parser(name)
        p.add_argument("instance", help="instance file path, or - for stdin")
        p.add_argument("--mode", choices=("rational", "float"), default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--oracle", action="store_true",
                       help="cross-check against the brute-force LP oracle")
        if name == "multiflow":
            p.add_argument("--epsilon", default=None,
                           help="overload budget (rational literal ok)")
    g = sub.add_parser("gen")
    g.add_argument("kind", choices=("cyclic", "graphon"))
    g.add_argument("arg1", help="cyclic: q; graphon: density spec")
    g.add_argument("arg2", nargs="?", default=None, help="graphon: cell count")
    return top


def main(argv=None):
    ns = _build_parser().parse_args(argv)
    try:
        if ns.command == "gen":
            return _gen(ns)
        text = (sys.stdin.read() if ns.instance == "-"
                else open(ns.instance, encoding="utf-8").read())
        inst = parse_instance(text)
        if inst.problem is None:
            raise Usage("instance has no problem stanza")
        op, args = inst.problem
        if ns.command == "oracle":
            code, report = _run_oracle(inst, args, ns, op)
        else:
            if op != ns.command:
                raise Usage(f"instance problem is {op!r}, not {ns.command!r}")
            if not hasattr(ns, "epsilon"):
                ns.epsilon = None
            code, report = _HANDLERS[ns.command](inst, args, ns)
        sys.stdout.write(emit_report(report))
        return code
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (Usage, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 3
    except MeasureFlowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
