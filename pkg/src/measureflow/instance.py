"""Text instance files and result reports.

Grammar (UTF-8, '#' comments):

    space { atoms: [s, m, t] }
    space { atoms: [a, b], intervals: [0:1/2, 1/2:1] }
    measure1 <name> { s: 1, t: -1/2 }
    measure2 <name> { (s,m): 2/3, (m,t): 0.25 }
    cost <name>     { (s,t): 5 }
    metric <name>   { (s,t): 1 }          # entries mirrored automatically
    potential <name> { s: 0, m: 1 }
    problem <op> { key: value, ... }      # value: name, number, or [list]

Exactly one space stanza, at most one problem stanza. Commas between
entries are optional on input (whitespace separates just as well); emitted
text always uses them. Rational literals p/q round trip bit-exact; decimals
parse to exact rationals. Key order in emitted text is canonical: stanzas
sorted by kind then name, entries by atom index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .measures import AtomSpace, Potential, SignedMeasure1, SignedMeasure2
from .multiflow import Pseudometric
from .numeric import format_number, parse_number

_PUNCT = "(){}[]:,"


def _tokens(text):
    """Yield (kind, value, line, col); kinds: id, num, punct, end."""
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _PUNCT:
            yield ("punct", ch, line, col)
            i += 1
            col += 1
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and (text[i + 1].isdigit()
                                                         or text[i + 1] == ".")):
            start = i
            startcol = col
            i += 1
            col += 1
            while i < n and (text[i].isdigit() or text[i] in "./"):
                i += 1
                col += 1
            yield ("num", text[start:i], line, startcol)
            continue
        if ch.isalpha() or ch == "_":
            start = i
            startcol = col
            while i < n and (text[i].isalnum() or text[i] in "_-"):
                i += 1
                col += 1
            yield ("id", text[start:i], line, startcol)
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    yield ("end", "", line, col)


class _Stream:
    def __init__(self, text):
        self.toks = list(_tokens(text))
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        tok = self.toks[self.pos]
        if tok[0] != "end":
            self.pos += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, got {tok[1]!r}", tok[2], tok[3])
        return tok

    def error(self, msg):
        tok = self.peek()
        raise ParseError(msg, tok[2], tok[3])


@dataclass
class InstanceFile:
    space: AtomSpace
    measures1: dict = field(default_factory=dict)
    measures2: dict = field(default_factory=dict)
    costs: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    potentials: dict = field(default_factory=dict)
    problem: tuple | None = None  # (op name, {key: value})


def _parse_number_tok(ts):
    tok = ts.expect("num")
    try:
        return parse_number(tok[1])
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad number {tok[1]!r}", tok[2], tok[3]) from None


def _parse_atom_entries(ts, space):
    """{ atom: value, ... } -> dict by atom index."""
    out = {}
    ts.expect("punct", "{")
    while ts.peek()[1] != "}":
        tok = ts.expect("id")
        try:
            idx = space.index(tok[1])
        except KeyError:
            raise ParseError(f"unknown atom {tok[1]!r}", tok[2], tok[3]) from None
        ts.expect("punct", ":")
        v = _parse_number_tok(ts)
        if idx in out:
            raise ParseError(f"duplicate entry for {tok[1]!r}", tok[2], tok[3])
        out[idx] = v
        if ts.peek()[1] == ",":
            ts.next()
    ts.expect("punct", "}")
    return out


def _parse_pair_entries(ts, space, mirror=False):
    out = {}
    ts.expect("punct", "{")
    while ts.peek()[1] != "}":
        opener = ts.expect("punct", "(")
        a = ts.expect("id")
        ts.expect("punct", ",")
        b = ts.expect("id")
        ts.expect("punct", ")")
        try:
            i = space.index(a[1])
            j = space.index(b[1])
        except KeyError as exc:
            raise ParseError(f"unknown atom {exc.args[0]!r}",
                             opener[2], opener[3]) from None
        ts.expect("punct", ":")
        v = _parse_number_tok(ts)
        keys = [(i, j), (j, i)] if mirror and i != j else [(i, j)]
        for key in keys:
            if key in out and out[key] != v:
                raise ParseError(
                    f"conflicting entry for ({a[1]},{b[1]})", opener[2], opener[3]
                )
            out[key] = v
        if ts.peek()[1] == ",":
            ts.next()
    ts.expect("punct", "}")
    return out


def _entries_to_table(space, entries):
    w = [[Fraction(0)] * space.n for _ in range(space.n)]
    for (i, j), v in entries.items():
        w[i][j] = v
    return w


def _parse_space(ts):
    ts.expect("punct", "{")
    atoms = None
    intervals = None
    while ts.peek()[1] != "}":
        key = ts.expect("id")
        ts.expect("punct", ":")
        ts.expect("punct", "[")
        if key[1] == "atoms":
            atoms = []
            while ts.peek()[1] != "]":
                atoms.append(ts.expect("id")[1])
                if ts.peek()[1] == ",":
                    ts.next()
        elif key[1] == "intervals":
            intervals = []
            while ts.peek()[1] != "]":
                lo = _parse_number_tok(ts)
                ts.expect("punct", ":")
                hi = _parse_number_tok(ts)
                intervals.append((lo, hi))
                if ts.peek()[1] == ",":
                    ts.next()
        else:
            raise ParseError(f"unknown space key {key[1]!r}", key[2], key[3])
        ts.expect("punct", "]")
        if ts.peek()[1] == ",":
            ts.next()
    ts.expect("punct", "}")
    if atoms is None:
        ts.error("space needs an atoms list")
    if len(set(atoms)) != len(atoms):
        ts.error("duplicate atom labels")
    try:
        return AtomSpace(tuple(atoms),
                         tuple(intervals) if intervals is not None else None)
    except ValueError as exc:
        ts.error(str(exc))


def _parse_problem(ts):
    op = ts.expect("id")[1]
    args = {}
    ts.expect("punct", "{")
    while ts.peek()[1] != "}":
        key = ts.expect("id")
        ts.expect("punct", ":")
        tok = ts.peek()
        if tok[0] == "num":
            val = _parse_number_tok(ts)
        elif tok[1] == "[":
            ts.next()
            val = []
            while ts.peek()[1] != "]":
                val.append(ts.expect("id")[1])
                if ts.peek()[1] == ",":
                    ts.next()
            ts.expect("punct", "]")
            val = tuple(val)
        else:
            val = ts.expect("id")[1]
        if key[1] in args:
            raise ParseError(f"duplicate argument {key[1]!r}", key[2], key[3])
        args[key[1]] = val
        if ts.peek()[1] == ",":
            ts.next()
    ts.expect("punct", "}")
    return op, args


def parse_instance(text) -> InstanceFile:
    ts = _Stream(text)
    space = None
    inst = None
    while ts.peek()[0] != "end":
        kind = ts.expect("id")
        if kind[1] == "space":
            if space is not None:
                raise ParseError("second space stanza", kind[2], kind[3])
            space = _parse_space(ts)
            inst = InstanceFile(space)
            continue
        if space is None:
            raise ParseError("space stanza must come first", kind[2], kind[3])
        if kind[1] == "problem":
            if inst.problem is not None:
                raise ParseError("second problem stanza", kind[2], kind[3])
            inst.problem = _parse_problem(ts)
            continue
        name = ts.expect("id")[1]
        taken = (name in inst.measures1 or name in inst.measures2
                 or name in inst.costs or name in inst.metrics
                 or name in inst.potentials)
        if taken:
            raise ParseError(f"name {name!r} already declared", kind[2], kind[3])
        if kind[1] == "measure1":
            entries = _parse_atom_entries(ts, space)
            w = [Fraction(0)] * space.n
            for i, v in entries.items():
                w[i] = v
            inst.measures1[name] = SignedMeasure1(space, w)
        elif kind[1] == "potential":
            entries = _parse_atom_entries(ts, space)
            f = [Fraction(0)] * space.n
            for i, v in entries.items():
                f[i] = v
            inst.potentials[name] = Potential(space, f)
        elif kind[1] == "measure2":
            entries = _parse_pair_entries(ts, space)
            inst.measures2[name] = SignedMeasure2(space, _entries_to_table(space, entries))
        elif kind[1] == "cost":
            entries = _parse_pair_entries(ts, space)
            inst.costs[name] = SignedMeasure2(space, _entries_to_table(space, entries))
        elif kind[1] == "metric":
            entries = _parse_pair_entries(ts, space, mirror=True)
            inst.metrics[name] = Pseudometric(space, _entries_to_table(space, entries))
        else:
            raise ParseError(f"unknown stanza kind {kind[1]!r}", kind[2], kind[3])
    if space is None:
        raise ParseError("instance has no space stanza", 1, 1)
    return inst


# ---------------------------------------------------------------------------
# emission


def _fmt(v):
    return format_number(v)


def _emit_atom_entries(space, values):
    parts = [
        f"{space.atoms[i]}: {_fmt(v)}"
        for i, v in enumerate(values)
        if v != 0
    ]
    return "{ " + ", ".join(parts) + " }" if parts else "{ }"


def _emit_pair_entries(space, table):
    parts = []
    for i in range(space.n):
        for j in range(space.n):
            if table[i][j] != 0:
                parts.append(
                    f"({space.atoms[i]},{space.atoms[j]}): {_fmt(table[i][j])}"
                )
    return "{ " + ", ".join(parts) + " }" if parts else "{ }"


def emit_instance(inst: InstanceFile) -> str:
    space = inst.space
    lines = []
    atoms = ", ".join(space.atoms)
    if space.intervals is not None:
        ivs = ", ".join(f"{_fmt(a)}:{_fmt(b)}" for a, b in space.intervals)
        lines.append(f"space {{ atoms: [{atoms}], intervals: [{ivs}] }}")
    else:
        lines.append(f"space {{ atoms: [{atoms}] }}")
    for kind, table in (
        ("measure1", inst.measures1),
        ("potential", inst.potentials),
        ("measure2", inst.measures2),
        ("cost", inst.costs),
        ("metric", inst.metrics),
    ):
        for name in sorted(table):
            obj = table[name]
            if kind in ("measure1",):
                body = _emit_atom_entries(space, obj.w)
            elif kind == "potential":
                body = _emit_atom_entries(space, obj.f)
            elif kind == "metric":
                body = _emit_pair_entries(space, obj.d)
            else:
                body = _emit_pair_entries(space, obj.w)
            lines.append(f"{kind} {name} {body}")
    if inst.problem is not None:
        op, args = inst.problem
        parts = []
        for key in sorted(args):
            val = args[key]
            if isinstance(val, tuple):
                parts.append(f"{key}: [{', '.join(val)}]")
            elif isinstance(val, str):
                parts.append(f"{key}: {val}")
            else:
                parts.append(f"{key}: {_fmt(val)}")
        lines.append(f"problem {op} {{ {', '.join(parts)} }}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# result reports


@dataclass
class ResultReport:
    problem: str
    verdict: str                # feasible | infeasible | value
    mode: str
    tol: object
    seed: object = None
    verification: str = "pass"
    value: object = None
    oracle: str | None = None
    sections: list = field(default_factory=list)  # (kind, name, body-text)

    def add_measure1(self, name, mu):
        self.sections.append(("measure1", name,
                              _emit_atom_entries(mu.space, mu.w)))

    def add_potential(self, name, f):
        self.sections.append(("potential", name,
                              _emit_atom_entries(f.space, f.f)))

    def add_measure2(self, name, mu):
        self.sections.append(("measure2", name,
                              _emit_pair_entries(mu.space, mu.w)))

    def add_metric(self, name, d):
        self.sections.append(("metric", name,
                              _emit_pair_entries(d.space, d.d)))

    def add_set(self, name, labels):
        self.sections.append(("set", name, "[" + ", ".join(sorted(labels)) + "]"))

    def add_line(self, name, text):
        self.sections.append(("line", name, str(text)))

    def add_walks(self, name, tau):
        body = ", ".join(
            f"{'>'.join(walk)}: {_fmt(w)}" for walk, w in tau.entries
        )
        self.sections.append(("walks", name, "{ " + body + " }"))


def emit_report(report: ResultReport) -> str:
    lines = ["report {"]
    lines.append(f"  problem: {report.problem}")
    lines.append(f"  verdict: {report.verdict}")
    if report.value is not None:
        lines.append(f"  value: {_fmt(report.value)}")
    lines.append(f"  mode: {report.mode}")
    lines.append(f"  tol: {_fmt(report.tol)}")
    lines.append(f"  seed: {'none' if report.seed is None else report.seed}")
    if report.oracle is not None:
        lines.append(f"  oracle: {report.oracle}")
    lines.append(f"  verification: {report.verification}")
    for kind, name, body in report.sections:
        if kind == "line":
            lines.append(f"  {name}: {body}")
        else:
            lines.append(f"  {kind} {name} {body}")
    lines.append("}")
    return "\n".join(lines) + "\n"
