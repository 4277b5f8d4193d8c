"""Adem relations through the qq packaging over H*(BD8), classical and quantum.

qq(alpha) collects all two-fold composites Sq^q Sq^p(alpha) as coefficients
of e^i s2^j in H*(BD8)_red = Z/2[e, s2].  Invariance under S4 means that for
every class of M the coefficient lies in the image of

    pi*: H*(BS4)_red = Z/2[n2, c3] -> H*(BD8)_red,   n2 -> s2 + e^2,  c3 -> e s2,

and that membership, together with a binomial identity, is what forces the
Adem relations.  Everything here is computed from ring data; the quantum side
is only visible through the defect of the naive relation on QS.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .elements import HTElement
from .gf2poly import Monomial, Poly, QuotientAlgebra, gf2_solve, lucas_binom
from .steenrod import SteenrodSquares


# --- group cohomology rings ---

def bd8_ring(reduced: bool = False) -> QuotientAlgebra:
    """H*(BD8) = Z/2[e, s1, s2]/(e s1); reduced keeps only e and s2."""
    if reduced:
        return QuotientAlgebra.build(["e", "s2"], [1, 2], [])
    return QuotientAlgebra.build(["e", "s1", "s2"], [1, 1, 2], [Poly.monomial((1, 1, 0))])


def bs4_ring(reduced: bool = False) -> QuotientAlgebra:
    """H*(BS4) = Z/2[n1, n2, c3]/(n1 c3); reduced keeps only n2 and c3."""
    if reduced:
        return QuotientAlgebra.build(["n2", "c3"], [2, 3], [])
    return QuotientAlgebra.build(["n1", "n2", "c3"], [1, 2, 3], [Poly.monomial((1, 0, 1))])


def pi_star(p: Poly, reduced: bool = True) -> Poly:
    """Image under pi*: n1 -> s1, n2 -> s2 + e^2, c3 -> e s2, normal-formed in BD8."""
    target = bd8_ring(reduced)
    if reduced:
        if p.nvars != 2:
            raise ValueError("reduced pi* expects a polynomial in (n2, c3)")
        images = [Poly(2, [(0, 1), (2, 0)]), Poly(2, [(1, 1)])]
    else:
        if p.nvars != 3:
            raise ValueError("pi* expects a polynomial in (n1, n2, c3)")
        images = [Poly(3, [(0, 1, 0)]), Poly(3, [(0, 0, 1), (2, 0, 0)]), Poly(3, [(1, 0, 1)])]
    return target.reduce(p.substitute(images))


def expansion_coefficient(a: int, b: int, i: int, j: int) -> int:
    """Coefficient of e^i s2^j in (s2 + e^2)^a (e s2)^b = pi*(n2^a c3^b)."""
    if i < b or (i - b) % 2:
        return 0
    t = (i - b) // 2
    if j - b != a - t:
        return 0
    return lucas_binom(a, t)


def fact1_coefficient(i: int, j: int, k: int) -> int:
    """Coefficient of e^{2i} s2^j in (e s2)^{2k} (e^2 + s2)^{i+j-3k}: C(i+j-3k, i-k)."""
    return lucas_binom(i + j - 3 * k, i - k)


def pi_star_basis(degree: int) -> list[tuple[int, int]]:
    """Exponents (a, b) with 2a + 3b = degree, i.e. the monomials n2^a c3^b."""
    return [(a, b) for b in range(degree // 3 + 1) for a in [(degree - 3 * b) // 2] if 2 * a + 3 * b == degree]


# --- qq ---

@dataclass(frozen=True)
class QqElement:
    """Sum of (class of M) * e^i s2^j; terms are (monomial, i, j)."""

    nvars: int
    terms: frozenset = frozenset()

    @classmethod
    def build(cls, nvars: int, terms: Iterable[tuple[Monomial, int, int]]) -> "QqElement":
        acc: set = set()
        for t in terms:
            acc ^= {t}
        return cls(nvars, frozenset(acc))

    def coefficient(self, i: int, j: int) -> Poly:
        """qq_{i,j}: the class multiplying e^i s2^j."""
        return Poly(self.nvars, [m for m, a, b in self.terms if (a, b) == (i, j)])

    def classes(self) -> list[Monomial]:
        return sorted({m for m, _, _ in self.terms})

    def part(self, m: Monomial) -> set[tuple[int, int]]:
        return {(i, j) for mm, i, j in self.terms if mm == m}

    def __bool__(self) -> bool:
        return bool(self.terms)


def qq_classical(alpha: Poly, sq: SteenrodSquares) -> QqElement:
    """qq(alpha) = sum_{p,q} Sq^q Sq^p(alpha) e^{|alpha|+p-q} s2^{|alpha|-p}."""
    ring = sq.ring
    alpha = ring.reduce(alpha)
    if not alpha:
        return QqElement.build(ring.nvars, [])
    d = ring.poly_degree(alpha)
    terms = []
    for p in range(d + 1):
        inner = sq.sq_component(alpha, p)
        if not inner:
            continue
        for q in range(d + p + 1):
            i, j = d + p - q, d - p
            if i < 0 or j < 0:
                continue
            for m in sq.sq_component(inner, q):
                terms.append((m, i, j))
    return QqElement.build(ring.nvars, terms)


@dataclass
class Fact1Report:
    preimage: dict[Monomial, set[tuple[int, int]]] = field(default_factory=dict)
    failures: list[Monomial] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def solve_in_pi_star_span(part: set[tuple[int, int]]) -> set[tuple[int, int]] | None:
    """Write sum e^i s2^j over ``part`` as a sum of pi*(n2^a c3^b), or None."""
    if not part:
        return set()
    out: set[tuple[int, int]] = set()
    by_degree: dict[int, set[tuple[int, int]]] = {}
    for i, j in part:
        by_degree.setdefault(i + 2 * j, set()).add((i, j))
    for deg, target_monos in by_degree.items():
        cols = pi_star_basis(deg)
        rows = [(i, (deg - i) // 2) for i in range(deg + 1) if (deg - i) % 2 == 0]
        pos = {rc: k for k, rc in enumerate(rows)}
        masks = []
        for a, b in cols:
            mask = 0
            for i, j in rows:
                if expansion_coefficient(a, b, i, j):
                    mask |= 1 << pos[(i, j)]
            masks.append(mask)
        target = 0
        for ij in target_monos:
            target |= 1 << pos[ij]
        sol = gf2_solve(masks, target)
        if sol is None:
            return None
        out |= {cols[k] for k in sol}
    return out


def fact1_solve(q: QqElement) -> Fact1Report:
    rep = Fact1Report()
    for m in q.classes():
        sol = solve_in_pi_star_span(q.part(m))
        if sol is None:
            rep.failures.append(m)
        else:
            rep.preimage[m] = sol
    return rep


def reconstruct_composition(report: Fact1Report, nvars: int, alpha_degree: int, p: int, q: int) -> Poly:
    """Sq^q Sq^p(alpha) read back from the pi*-preimage of qq(alpha)."""
    i, j = alpha_degree + p - q, alpha_degree - p
    if i < 0 or j < 0:
        return Poly.zero(nvars)
    out = []
    for m, pre in report.preimage.items():
        c = 0
        for a, b in pre:
            c ^= expansion_coefficient(a, b, i, j)
        if c:
            out.append(m)
    return Poly(nvars, out)


def even_case_coefficients(alpha_degree: int, p: int, q: int) -> list[tuple[int, int, int]]:
    """For q and l = |alpha| - p even: (a, b, C(3r+m-3i, r+m-i)) with b = 2i, a = 3r+m-3i.

    The third entry is the coefficient of e^{l+2m} s2^l in pi*(n2^a c3^b),
    where l = 2r and m = p - q/2.
    """
    l = alpha_degree - p
    if q % 2 or l % 2 or l < 0:
        raise ValueError("only the case q, |alpha| - p even is tabulated")
    r, m = l // 2, p - q // 2
    return [(3 * r + m - 3 * i, 2 * i, lucas_binom(3 * r + m - 3 * i, r + m - i)) for i in range(r + 1)]


# --- binomial identity and Adem relations ---

def lemma72_check(m: int, s: int) -> bool:
    """C(3s+m, s+m) == sum_l C(m+l-1, 2l) C(3s+m, s-l) mod 2."""
    lhs = lucas_binom(3 * s + m, s + m)
    rhs = 0
    for l in range(s + 1):
        rhs ^= lucas_binom(m + l - 1, 2 * l) & lucas_binom(3 * s + m, s - l)
    return lhs == rhs


def adem_rhs(p: int, q: int) -> list[tuple[int, tuple[int, int]]]:
    """Nonzero terms of Sq^q Sq^p = sum_s C(p-s-1, q-2s) Sq^{p+q-s} Sq^s."""
    if p <= 0 or q <= 0:
        raise ValueError("Adem relations need p, q > 0")
    if q >= 2 * p:
        raise ValueError(f"(p, q) = ({p}, {q}) is admissible (q >= 2p); no relation")
    return [(1, (p + q - s, s)) for s in range(q // 2 + 1) if lucas_binom(p - s - 1, q - 2 * s)]


@dataclass
class AdemReport:
    p: int
    q: int
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_adem(sq: SteenrodSquares, p: int, q: int) -> AdemReport:
    rhs_terms = adem_rhs(p, q)
    rep = AdemReport(p, q)
    for alpha in sq.ring.basis_classes:
        a = Poly.monomial(alpha)
        lhs = sq.compose(a, q, p)
        rhs = Poly.zero(sq.ring.nvars)
        for _, (u, v) in rhs_terms:
            rhs = rhs + sq.compose(a, u, v)
        rep.checked += 1
        if lhs != rhs:
            rep.failures.append(
                f"Sq^{q}Sq^{p}({sq.ring.format(alpha)}) = {sq.ring.format(lhs)} but RHS = {sq.ring.format(rhs)}"
            )
    return rep


def admissible_pairs(limit: int) -> list[tuple[int, int]]:
    """All (p, q) with p, q > 0, q < 2p and p + q <= limit."""
    return [(p, q) for p in range(1, limit) for q in range(1, min(2 * p, limit - p + 1))]


def verify_qq_identity(sq: SteenrodSquares, alpha: Poly, p: int, q: int) -> bool:
    """qq_{d+p-q, d-p} == sum_s C(p-s-1, q-2s) qq_{d+2s-p-q, d-s}, d = |alpha|.

    Coefficients with a negative index are zero.
    """
    ring = sq.ring
    qq = qq_classical(alpha, sq)
    d = ring.poly_degree(ring.reduce(alpha)) if ring.reduce(alpha) else 0
    lhs = qq.coefficient(d + p - q, d - p)
    rhs = Poly.zero(ring.nvars)
    for _, (u, s) in adem_rhs(p, q):
        rhs = rhs + qq.coefficient(d + 2 * s - p - q, d - s)
    return lhs == rhs


# --- the quantum defect ---

@dataclass
class DefectReport:
    total: HTElement
    contributions: dict[tuple[int, int], HTElement]

    def energy_part(self, k: int) -> HTElement:
        return self.total.where(lambda m, t, h: t == k)

    def __bool__(self) -> bool:
        return bool(self.total)


def _ab_linear(engine, z: HTElement, deg_shift: int, t_shift: int) -> HTElement:
    out = HTElement.zero(engine.ring.nvars)
    for term in z:
        out = out + engine.qs_component_ab(HTElement(engine.ring.nvars, [term]), deg_shift, t_shift)
    return out


def quantum_adem_defect(engine, alpha, p: int, q: int) -> DefectReport:
    """Sum over (b, d) of QS^{q-2bN,b} QS^{p-2dN,d}(alpha) minus the Adem right-hand side.

    ``engine`` is a :class:`QuantumSquares`.  The energy-zero part reduces to
    the classical Adem relation and vanishes; the remainder is the defect.
    """
    terms = adem_rhs(p, q)
    a = engine.as_element(alpha)
    N = engine.N
    jmax = engine.qstruct.jmax
    contributions: dict[tuple[int, int], HTElement] = {}
    total = HTElement.zero(engine.ring.nvars)
    for d in range(jmax + 1):
        inner_lhs = _ab_linear(engine, a, p - 2 * d * N, d)
        inner_rhs = {s: _ab_linear(engine, a, s - 2 * d * N, d) for _, (_, s) in terms}
        for b in range(jmax + 1):
            piece = _ab_linear(engine, inner_lhs, q - 2 * b * N, b)
            for _, (u, s) in terms:
                piece = piece + _ab_linear(engine, inner_rhs[s], u - 2 * b * N, b)
            if piece:
                contributions[(b, d)] = piece
                total = total + piece
    return DefectReport(total, contributions)
