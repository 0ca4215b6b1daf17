from fractions import Fraction

import pytest

from measureflow import ParseError, ResultReport, emit_instance, emit_report, parse_instance

FULL = """# every stanza kind in one file
space { atoms: [s, m, t], intervals: [0:1/3, 1/3:2/3, 2/3:1] }

measure1 supply { s: 1, m: -1/2 }
potential f { m: 1, t: 2 }
measure2 cap { (s,m): 2/3, (m,t): 0.25 }
cost c { (s,t): 5 }
metric d { (s,t): 1 }

problem supply-demand { capacity: cap, supply: supply, demand: supply }
"""


def test_round_trip_idempotent():
    inst = parse_instance(FULL)
    once = emit_instance(inst)
    twice = emit_instance(parse_instance(once))
    assert once == twice


def test_parse_values_exact():
    inst = parse_instance(FULL)
    assert inst.measures2["cap"][("s", "m")] == Fraction(2, 3)
    assert inst.measures2["cap"][("m", "t")] == Fraction(1, 4)
    assert inst.measures1["supply"]["m"] == Fraction(-1, 2)
    assert inst.potentials["f"].as_dict() == {"s": 0, "m": 1, "t": 2}
    assert inst.costs["c"][("s", "t")] == 5
    assert inst.problem == (
        "supply-demand",
        {"capacity": "cap", "supply": "supply", "demand": "supply"},
    )


def test_metric_mirroring_and_conflict():
    inst = parse_instance(FULL)
    d = inst.metrics["d"]
    assert d.dist("s", "t") == 1 and d.dist("t", "s") == 1
    with pytest.raises(ParseError) as exc:
        parse_instance(
            "space { atoms: [a, b] }\nmetric d { (a,b): 1, (b,a): 2 }"
        )
    assert "conflict" in str(exc.value)
    # explicitly equal mirror entries are fine
    ok = parse_instance("space { atoms: [a, b] }\nmetric d { (a,b): 1, (b,a): 1 }")
    assert ok.metrics["d"].dist("b", "a") == 1


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse_instance("space { atoms: [a, b] }\nmeasure1 x { q: 1 }")
    assert exc.value.line == 2
    with pytest.raises(ParseError):
        parse_instance("measure1 x { }")  # space must come first
    with pytest.raises(ParseError):
        parse_instance("space { atoms: [a, a] }")
    with pytest.raises(ParseError):
        parse_instance(
            "space { atoms: [a] }\nmeasure1 x { }\nmeasure1 x { }"
        )
    with pytest.raises(ParseError):
        parse_instance(
            "space { atoms: [a, b] }\nmeasure1 x { a: 1, a: 2 }"
        )
    with pytest.raises(ParseError):
        parse_instance(
            "space { atoms: [a] }\nproblem oops { }\nproblem oops { }"
        )


def test_comments_and_commas_optional():
    inst = parse_instance(
        "space { atoms: [a b] } # trailing\nmeasure1 x { a: 1 }"
    )
    assert inst.space.atoms == ("a", "b")
    assert inst.measures1["x"]["a"] == 1


def test_zero_entries_dropped_on_emit():
    inst = parse_instance(
        "space { atoms: [a, b] }\nmeasure2 z { (a,b): 0, (b,a): 1 }"
    )
    out = emit_instance(inst)
    assert "(a,b)" not in out
    assert "(b,a): 1" in out


def test_report_key_order():
    rep = ResultReport(
        problem="circulation",
        verdict="feasible",
        mode="rational",
        tol=0,
    )
    rep.add_line("lhs", Fraction(1, 2))
    text = emit_report(rep)
    lines = text.splitlines()
    assert lines[0] == "report {"
    assert lines[1].strip() == "problem: circulation"
    assert lines[2].strip() == "verdict: feasible"
    assert lines[3].strip() == "mode: rational"
    assert lines[4].strip() == "tol: 0"
    assert lines[5].strip() == "seed: none"
    assert lines[6].strip() == "verification: pass"
    assert lines[7].strip() == "lhs: 1/2"
    assert lines[-1] == "}"


def test_report_value_and_oracle_slots():
    rep = ResultReport(
        problem="maxflow",
        verdict="value",
        mode="float",
        tol=1e-9,
        value=Fraction(3, 2),
        oracle="agree",
        seed=7,
    )
    text = emit_report(rep)
    idx = {line.split(":")[0].strip(): i for i, line in enumerate(text.splitlines()) if ":" in line}
    assert idx["problem"] < idx["verdict"] < idx["value"] < idx["mode"]
    assert idx["mode"] < idx["tol"] < idx["seed"] < idx["oracle"] < idx["verification"]
