"""Plain-text manifold descriptions and the built-in registry.

A spec file has up to five sections::

    [manifold]
    name = CP^2
    top_degree = 4
    minimal_chern = 3

    [generators]
    x = 2

    [relations]
    x^3

    [h2]
    line = 3 ; x=1

    [quantum]
    x, x^2 = T @ line
    x^2, x^2 = x T @ line

Lines in ``[quantum]`` read ``a, b = gamma T^k @ label``: the class gamma
appears with T^k in the quantum product a * b through curves in the class
``label``.  Pairs are unordered.  ``#`` starts a comment.  Rings without ``[h2]`` and
``[quantum]`` (and without ``minimal_chern``) are ring-only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations

from .elements import HTElement, format_monomial, format_term
from .gf2poly import Monomial, Poly
from .quantum import CurveClass, QuantumStructure, validate_quantum
from .rings import PresentationError, RingPresentation

SECTIONS = ("manifold", "generators", "relations", "h2", "quantum")


class SpecError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


# --- polynomial expressions ---

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(\d+)|(\^)|(\+)|(\*)|(\S))")

Factor = tuple[str | None, int, int]  # (name or None for the constant 1, exponent, column)


def tokenize(text: str, line: int | None = None, col0: int = 1) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        col = col0 + m.start(m.lastindex)
        kind = ("name", "int", "^", "+", "*", "bad")[m.lastindex - 1]
        if kind == "bad":
            raise SpecError(f"unexpected character {m.group(m.lastindex)!r}", line, col)
        tokens.append((kind, m.group(m.lastindex), col))
        pos = m.end()
    return tokens


def parse_sum(text: str, line: int | None = None, col0: int = 1) -> list[list[Factor]]:
    """Parse ``term + term + ...``; a term is factors joined by ``*`` or spaces.

    The literal ``0`` is the empty sum and ``1`` the empty product.
    """
    tokens = tokenize(text, line, col0)
    if not tokens:
        raise SpecError("empty expression", line, col0)
    if len(tokens) == 1 and tokens[0][:2] == ("int", "0"):
        return []
    terms: list[list[Factor]] = []
    i = 0

    def expect_factor() -> Factor:
        nonlocal i
        if i >= len(tokens):
            col = tokens[-1][2] + len(tokens[-1][1]) if tokens else col0
            raise SpecError("expected a factor", line, col)
        kind, val, col = tokens[i]
        if kind == "int":
            if val != "1":
                raise SpecError(f"coefficient {val} is not allowed over Z/2 (use 1 or repeat terms)", line, col)
            i += 1
            return (None, 0, col)
        if kind != "name":
            raise SpecError(f"expected a factor, got {val!r}", line, col)
        i += 1
        exp = 1
        if i < len(tokens) and tokens[i][0] == "^":
            i += 1
            if i >= len(tokens) or tokens[i][0] != "int":
                raise SpecError("expected an integer exponent after '^'", line, tokens[i - 1][2] + 1)
            exp = int(tokens[i][1])
            i += 1
        return (val, exp, col)

    while True:
        term = [expect_factor()]
        while i < len(tokens) and tokens[i][0] in ("*", "name", "int"):
            if tokens[i][0] == "*":
                i += 1
            term.append(expect_factor())
        terms.append(term)
        if i >= len(tokens):
            break
        kind, val, col = tokens[i]
        if kind != "+":
            raise SpecError(f"unexpected {val!r}", line, col)
        i += 1
    return terms


def _monomial(term: list[Factor], names: list[str], line, special: dict[str, int] | None = None):
    exps = [0] * len(names)
    extra = {k: 0 for k in (special or {})}
    for name, e, col in term:
        if name is None:
            continue
        if special and name in special:
            extra[name] += e
        elif name in names:
            exps[names.index(name)] += e
        else:
            raise SpecError(f"unknown generator {name!r}", line, col)
    return tuple(exps), extra


def parse_poly(text: str, names: list[str], line: int | None = None, col0: int = 1) -> Poly:
    terms = parse_sum(text, line, col0)
    return Poly(len(names), [_monomial(t, names, line)[0] for t in terms])


def parse_element(text: str, names: list[str]) -> HTElement:
    """Parse rendered output such as ``x^2 h^4 + T h^2 + x T``."""
    terms = parse_sum(text)
    out = []
    for t in terms:
        m, extra = _monomial(t, names, None, {"T": 0, "h": 0})
        out.append((m, extra["T"], extra["h"]))
    return HTElement(len(names), out)


# --- rendering ---

def element_sort_key(ring: RingPresentation):
    """Rendering order: h-exponent descending, then basis order, then T."""
    index = ring.index
    return lambda term: (-term[2], index.get(term[0], len(index)), term[1])


def render_element(a: HTElement, ring: RingPresentation) -> str:
    if not a:
        return "0"
    return " + ".join(format_term(m, t, h, ring.names) for m, t, h in sorted(a, key=element_sort_key(ring)))


# --- the spec itself ---

@dataclass
class ManifoldSpec:
    name: str
    generators: tuple[tuple[str, int], ...]
    relations: tuple[Poly, ...]
    top_degree: int
    minimal_chern: int | None = None
    curve_classes: tuple[CurveClass, ...] = ()
    constants: tuple[tuple[Monomial, Monomial, Monomial, str, int], ...] = ()
    _ring: RingPresentation | None = field(default=None, repr=False, compare=False)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.generators]

    @property
    def has_quantum(self) -> bool:
        return self.minimal_chern is not None

    def ring(self) -> RingPresentation:
        if self._ring is None:
            try:
                self._ring = RingPresentation(self.name, self.generators, self.relations, self.top_degree)
            except PresentationError as exc:
                raise SpecError(str(exc)) from None
        return self._ring

    def quantum(self, validate: bool = True) -> QuantumStructure:
        if not self.has_quantum:
            raise SpecError(f"{self.name} has no quantum data (ring-only)")
        ring = self.ring()
        table: dict[tuple[Monomial, Monomial], list] = {}
        for a, b, g, label, k in self.constants:
            table.setdefault((a, b), []).append((g, label, k))
            if a != b:
                table.setdefault((b, a), []).append((g, label, k))
        qs = QuantumStructure(ring, self.minimal_chern, self.curve_classes, table)
        if validate:
            rep = validate_quantum(qs)
            if not rep.ok:
                raise SpecError(f"{self.name}: quantum structure failed validation: " + "; ".join(rep.failures[:5]))
        return qs

    def render(self) -> str:
        names = self.names
        out = ["[manifold]", f"name = {self.name}", f"top_degree = {self.top_degree}"]
        if self.minimal_chern is not None:
            out.append(f"minimal_chern = {self.minimal_chern}")
        out += ["", "[generators]"] + [f"{n} = {d}" for n, d in self.generators]
        out += ["", "[relations]"]
        for r in self.relations:
            monos = sorted(r.terms, reverse=True)
            out.append(" + ".join(format_monomial(m, names) for m in monos) if monos else "0")
        if self.has_quantum:
            out += ["", "[h2]"]
            for c in self.curve_classes:
                inter = ", ".join(f"{g}={v}" for g, v in sorted(c.intersections.items()) if v)
                out.append(f"{c.label} = {c.chern}" + (f" ; {inter}" if inter else ""))
            out += ["", "[quantum]"]
            for a, b, g, label, k in self.constants:
                rhs = format_term(g, k, 0, names)
                out.append(f"{format_monomial(a, names)}, {format_monomial(b, names)} = {rhs} @ {label}")
        return "\n".join(out) + "\n"


def _split_kv(body: str, lineno: int, col0: int) -> tuple[str, str, int]:
    if "=" not in body:
        raise SpecError("expected 'key = value'", lineno, col0)
    key, _, val = body.partition("=")
    return key.strip(), val.strip(), col0 + len(key) + 1 + (len(val) - len(val.lstrip()))


def _int(val: str, what: str, lineno: int, col: int) -> int:
    try:
        return int(val)
    except ValueError:
        raise SpecError(f"{what} must be an integer, got {val!r}", lineno, col) from None


def parse_spec(text: str) -> ManifoldSpec:
    section = None
    meta: dict[str, tuple[str, int, int]] = {}
    generators: list[tuple[str, int]] = []
    relation_lines: list[tuple[str, int, int]] = []
    h2_lines: list[tuple[str, int, int]] = []
    quantum_lines: list[tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        col0 = len(body) - len(body.lstrip()) + 1
        body = body.strip()
        if body.startswith("["):
            if not body.endswith("]") or body[1:-1].strip() not in SECTIONS:
                raise SpecError(f"unknown section {body}", lineno, col0)
            section = body[1:-1].strip()
            continue
        if section is None:
            raise SpecError("content before the first section header", lineno, col0)
        if section == "manifold":
            key, val, vcol = _split_kv(body, lineno, col0)
            if key not in ("name", "top_degree", "minimal_chern"):
                raise SpecError(f"unknown key {key!r} in [manifold]", lineno, col0)
            meta[key] = (val, lineno, vcol)
        elif section == "generators":
            key, val, vcol = _split_kv(body, lineno, col0)
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", key) or key in ("T", "h"):
                raise SpecError(f"invalid generator name {key!r}", lineno, col0)
            if key in [n for n, _ in generators]:
                raise SpecError(f"duplicate generator {key!r}", lineno, col0)
            deg = _int(val, "generator degree", lineno, vcol)
            if deg <= 0:
                raise SpecError("generator degrees must be positive", lineno, vcol)
            generators.append((key, deg))
        elif section == "relations":
            relation_lines.append((body, lineno, col0))
        elif section == "h2":
            h2_lines.append((body, lineno, col0))
        else:
            quantum_lines.append((body, lineno, col0))

    for key in ("name", "top_degree"):
        if key not in meta:
            raise SpecError(f"[manifold] is missing {key!r}")
    name = meta["name"][0]
    val, lineno, col = meta["top_degree"]
    top = _int(val, "top_degree", lineno, col)
    N = None
    if "minimal_chern" in meta:
        val, lineno, col = meta["minimal_chern"]
        N = _int(val, "minimal_chern", lineno, col)
    names = [n for n, _ in generators]
    degrees = [d for _, d in generators]

    relations = []
    for body, lineno, col0 in relation_lines:
        p = parse_poly(body, names, lineno, col0)
        degs = p.degrees(degrees)
        if len(degs) > 1:
            raise SpecError(f"inhomogeneous relation (degrees {sorted(degs)})", lineno, col0)
        relations.append(p)

    curve_classes = []
    for body, lineno, col0 in h2_lines:
        head, _, rest = body.partition(";")
        label, val, vcol = _split_kv(head, lineno, col0)
        chern = _int(val, "c1", lineno, vcol)
        inter: dict[str, int] = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            g, _, v = item.partition("=")
            g = g.strip()
            if g not in names:
                raise SpecError(f"unknown generator {g!r} in intersections", lineno, col0 + body.find(g))
            inter[g] = _int(v.strip(), "intersection number", lineno, col0 + body.find(item)) & 1
        curve_classes.append(CurveClass(label, chern, inter))
    labels = {c.label for c in curve_classes}

    constants = []
    seen = set()
    for body, lineno, col0 in quantum_lines:
        lhs, eq, rhs = body.partition("=")
        if not eq:
            raise SpecError("expected 'a, b = gamma T^k @ label'", lineno, col0)
        out_text, at, label = rhs.partition("@")
        label = label.strip()
        if not at or not label:
            raise SpecError("missing '@ curve_label'", lineno, col0 + len(body))
        if label not in labels:
            raise SpecError(f"unknown curve class {label!r}", lineno, col0 + body.rfind(label))
        comma = lhs.find(",")
        if comma < 0:
            raise SpecError("left side must read 'a, b'", lineno, col0)
        a = parse_sum(lhs[:comma], lineno, col0)
        b = parse_sum(lhs[comma + 1:], lineno, col0 + comma + 1)
        if len(a) != 1 or len(b) != 1:
            raise SpecError("left side must read 'a, b' with monomials a and b", lineno, col0)
        am, _ = _monomial(a[0], names, lineno)
        bm, _ = _monomial(b[0], names, lineno)
        ocol = col0 + len(lhs) + 1
        outs = parse_sum(out_text, lineno, ocol)
        if len(outs) != 1:
            raise SpecError("one output term per line", lineno, ocol)
        gm, extra = _monomial(outs[0], names, lineno, {"T": 0})
        key = (min(am, bm), max(am, bm), gm, label)
        if key in seen:
            raise SpecError("duplicate structure constant", lineno, col0)
        seen.add(key)
        constants.append((am, bm, gm, label, extra["T"]))

    if (h2_lines or quantum_lines) and N is None:
        raise SpecError("[h2]/[quantum] given but minimal_chern is missing")
    return ManifoldSpec(name, tuple(generators), tuple(relations), top, N, tuple(curve_classes), tuple(constants))


def spec_from_structure(qs: QuantumStructure) -> ManifoldSpec:
    """Describe an in-memory quantum structure as a spec (one line per unordered pair)."""
    ring = qs.ring
    constants = []
    done = set()
    for (a, b), consts in sorted(qs.quantum_constants.items(), key=lambda kv: (ring.index[kv[0][0]], ring.index[kv[0][1]])):
        if (b, a) in done:
            continue
        done.add((a, b))
        for g, label, k in sorted(consts):
            if k > 0:
                constants.append((a, b, g, label, k))
    return ManifoldSpec(
        ring.name, ring.generators, ring.relations, ring.top_degree, qs.N,
        tuple(CurveClass(c.label, c.chern, dict(c.intersections)) for c in qs.curve_classes.values()),
        tuple(constants),
    )


# --- built-ins ---

def _cpn_text(n: int) -> str:
    lines = ["[manifold]", f"name = CP^{n}", f"top_degree = {2 * n}", f"minimal_chern = {n + 1}",
             "", "[generators]", "x = 2", "", "[relations]", f"x^{n + 1}",
             "", "[h2]", f"line = {n + 1} ; x=1", "", "[quantum]"]
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            if a + b > n:
                lines.append(f"{format_monomial((a,), ['x'])}, {format_monomial((b,), ['x'])} = "
                             f"{format_term((a + b - n - 1,), 1, 0, ['x'])} @ line")
    return "\n".join(lines) + "\n"


def _product_p1_text(k: int) -> str:
    names = ["x", "y", "z"][:k]
    lines = ["[manifold]", "name = " + " x ".join(["CP^1"] * k), f"top_degree = {2 * k}", "minimal_chern = 2",
             "", "[generators]"] + [f"{g} = 2" for g in names]
    lines += ["", "[relations]"] + [f"{g}^2" for g in names]
    lines += ["", "[h2]"]
    label_of = {}
    for r in range(1, k + 1):
        for sub in combinations(range(k), r):
            label = "+".join(f"mu_{names[i]}" for i in sub)
            label_of[sub] = label
            lines.append(f"{label} = {2 * r} ; " + ", ".join(f"{names[i]}=1" for i in sub))
    lines += ["", "[quantum]"]
    basis = [tuple(bits) for bits in _bit_vectors(k)]
    for ia, a in enumerate(basis):
        for b in basis[ia:]:
            overlap = tuple(i for i in range(k) if a[i] and b[i])
            if overlap:
                g = tuple((a[i] + b[i]) % 2 for i in range(k))
                lines.append(f"{format_monomial(a, names)}, {format_monomial(b, names)} = "
                             f"{format_term(g, len(overlap), 0, names)} @ {label_of[overlap]}")
    return "\n".join(lines) + "\n"


def _bit_vectors(k: int):
    return sorted((tuple((v >> i) & 1 for i in range(k)) for v in range(1 << k)), key=lambda t: (sum(t), [-x for x in t]))


M05BAR_TEXT = """\
[manifold]
name = M05bar
top_degree = 4

[generators]
w0 = 2
w1 = 2
winf = 2
d1 = 2
d2 = 2

[relations]
d1^2
d2^2
w0^3
w1^3
winf^3
w0^2 + d1*d2
w1^2 + d1*d2
winf^2 + d1*d2
d1*w0
d1*w1
d1*winf
d2*w0
d2*w1
d2*winf
w0*w1
w0*winf
w1*winf
"""

BUILTINS = ["cpn:1", "cpn:2", "cpn:3", "cpn:4", "cpn:5", "cpn:6", "cpn:7", "cpn:8", "cpn:9", "cpn:10",
            "p1xp1", "p1cubed", "m05bar"]


def builtin_text(name: str) -> str:
    if name.startswith("cpn:"):
        try:
            n = int(name[4:])
        except ValueError:
            raise SpecError(f"bad manifold name {name!r}") from None
        if not 1 <= n <= 10:
            raise SpecError("cpn:N is built in for 1 <= N <= 10")
        return _cpn_text(n)
    if name == "p1xp1":
        return _product_p1_text(2)
    if name == "p1cubed":
        return _product_p1_text(3)
    if name == "m05bar":
        return M05BAR_TEXT
    raise SpecError(f"unknown manifold {name!r} (built-ins: cpn:1..cpn:10, p1xp1, p1cubed, m05bar)")


def load_spec(name_or_path: str) -> ManifoldSpec:
    """A built-in name, or a path to a spec file."""
    import os

    if os.path.exists(name_or_path):
        with open(name_or_path, encoding="utf-8") as fh:
            return parse_spec(fh.read())
    return parse_spec(builtin_text(name_or_path))
