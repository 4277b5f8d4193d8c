"""Multivariate polynomials over GF(2), Groebner bases and normal forms.

A polynomial is a set of exponent vectors; a monomial is present iff its
coefficient is 1.  All rings in this package are graded, so generators carry
positive integer degrees and every ideal we reduce by is homogeneous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

Monomial = tuple[int, ...]

MAX_EXPONENT = 255


class GeneratorMismatch(ValueError):
    pass


class InhomogeneousRelation(ValueError):
    pass


def lucas_binom(n: int, k: int) -> int:
    """C(n, k) mod 2 via Lucas' theorem; 0 whenever k or n is out of range.

    Negative ``n`` is treated as out of range as well, which is what the
    closed-form sums in this package rely on.
    """
    if k < 0 or n < 0 or k > n:
        return 0
    return 1 if (n & k) == k else 0


def monomial_degree(m: Monomial, weights: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(m, weights))


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    out = tuple(x + y for x, y in zip(a, b))
    if out and max(out) > MAX_EXPONENT:
        raise OverflowError(f"exponent overflow in {out}")
    return out


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class Poly:
    """An immutable polynomial over GF(2) in ``nvars`` variables."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Iterable[Monomial] = ()):
        ts = set()
        for m in terms:
            m = tuple(m)
            if len(m) != nvars:
                raise GeneratorMismatch(f"monomial {m} has {len(m)} exponents, expected {nvars}")
            ts ^= {m}
        self.nvars = nvars
        self.terms = frozenset(ts)
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: frozenset) -> "Poly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, frozenset())

    @classmethod
    def one(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, frozenset({(0,) * nvars}))

    @classmethod
    def monomial(cls, m: Sequence[int]) -> "Poly":
        return cls._raw(len(m), frozenset({tuple(m)}))

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "Poly":
        m = [0] * nvars
        m[i] = power
        return cls.monomial(m)

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise GeneratorMismatch(f"{self.nvars} vs {other.nvars} generators")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        return Poly._raw(self.nvars, self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        out: set[Monomial] = set()
        for a in self.terms:
            for b in other.terms:
                out ^= {monomial_mul(a, b)}
        return Poly._raw(self.nvars, frozenset(out))

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self.terms))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, m: Monomial) -> bool:
        return m in self.terms

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {sorted(self.terms)})"

    def degrees(self, weights: Sequence[int]) -> set[int]:
        return {monomial_degree(m, weights) for m in self.terms}

    def is_homogeneous(self, weights: Sequence[int]) -> bool:
        return len(self.degrees(weights)) <= 1

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Ring map sending variable i to ``images[i]``."""
        if len(images) != self.nvars:
            raise GeneratorMismatch("need one image per variable")
        target = images[0].nvars if images else 0
        out = Poly.zero(target)
        cache: dict[tuple[int, int], Poly] = {}
        for m in self.terms:
            term = Poly.one(target)
            for i, e in enumerate(m):
                if e:
                    if (i, e) not in cache:
                        cache[(i, e)] = images[i] ** e
                    term = term * cache[(i, e)]
            out = out + term
        return out


@dataclass(frozen=True)
class GradedOrder:
    """Weighted-degree order, ties broken lexicographically by generator index."""

    weights: tuple[int, ...]

    def key(self, m: Monomial) -> tuple:
        return (monomial_degree(m, self.weights), m)

    def leading(self, p: Poly) -> Monomial:
        return max(p.terms, key=self.key)

    def sorted(self, monomials: Iterable[Monomial], reverse: bool = True) -> list[Monomial]:
        return sorted(monomials, key=self.key, reverse=reverse)


def _reduce(p: Poly, basis: Sequence[Poly], leads: Sequence[Monomial], order: GradedOrder) -> Poly:
    """Full reduction of ``p`` by ``basis`` (remainder has no reducible term)."""
    remainder: set[Monomial] = set()
    work = set(p.terms)
    while work:
        m = max(work, key=order.key)
        for g, lm in zip(basis, leads):
            if divides(lm, m):
                q = monomial_div(m, lm)
                for t in g.terms:
                    work ^= {monomial_mul(t, q)}
                break
        else:
            work.discard(m)
            remainder.add(m)
    return Poly._raw(p.nvars, frozenset(remainder))


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis of a homogeneous ideal."""

    polys: tuple[Poly, ...]
    order: GradedOrder
    nvars: int

    @cached_property
    def leads(self) -> tuple[Monomial, ...]:
        return tuple(self.order.leading(g) for g in self.polys)

    def normal_form(self, p: Poly) -> Poly:
        if p.nvars != self.nvars:
            raise GeneratorMismatch(f"{p.nvars} vs {self.nvars} generators")
        return _reduce(p, self.polys, self.leads, self.order)

    def is_standard(self, m: Monomial) -> bool:
        return not any(divides(lm, m) for lm in self.leads)

    def standard_monomials(self, degree: int) -> list[Monomial]:
        """Normal-form monomials of the given weighted degree, in descending order."""
        found = [m for m in monomials_of_degree(self.order.weights, degree) if self.is_standard(m)]
        return self.order.sorted(found)


def normal_form(p: Poly, gb: GroebnerBasis) -> Poly:
    return gb.normal_form(p)


def monomials_of_degree(weights: Sequence[int], degree: int) -> Iterator[Monomial]:
    """All exponent vectors of the given weighted degree (weights must be positive)."""
    n = len(weights)

    def rec(i: int, remaining: int) -> Iterator[list[int]]:
        if i == n:
            if remaining == 0:
                yield []
            return
        w = weights[i]
        for e in range(remaining // w, -1, -1):
            for rest in rec(i + 1, remaining - e * w):
                yield [e] + rest

    if degree < 0:
        return
    for m in rec(0, degree):
        yield tuple(m)


def buchberger(relations: Sequence[Poly], weights: Sequence[int]) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``relations``.

    Every relation must be homogeneous with respect to ``weights``.
    """
    weights = tuple(weights)
    if any(w <= 0 for w in weights):
        raise ValueError("generator degrees must be positive")
    order = GradedOrder(weights)
    nvars = len(weights)
    gens = []
    for r in relations:
        if r.nvars != nvars:
            raise GeneratorMismatch(f"relation has {r.nvars} variables, expected {nvars}")
        if not r.is_homogeneous(weights):
            raise InhomogeneousRelation(f"relation {r!r} is not homogeneous (degrees {sorted(r.degrees(weights))})")
        if r:
            gens.append(r)

    basis: list[Poly] = []
    leads: list[Monomial] = []

    def add(g: Poly) -> None:
        basis.append(g)
        leads.append(order.leading(g))

    for r in gens:
        g = _reduce(r, basis, leads, order)
        if g:
            add(g)
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        i, j = pairs.pop()
        li, lj = leads[i], leads[j]
        lcm = monomial_lcm(li, lj)
        if lcm == monomial_mul(li, lj):
            continue  # coprime leading terms
        si = Poly._raw(nvars, frozenset(monomial_mul(t, monomial_div(lcm, li)) for t in basis[i].terms))
        sj = Poly._raw(nvars, frozenset(monomial_mul(t, monomial_div(lcm, lj)) for t in basis[j].terms))
        s = _reduce(si + sj, basis, leads, order)
        if s:
            add(s)
            k = len(basis) - 1
            pairs.extend((m, k) for m in range(k))

    # minimalise, then inter-reduce
    keep = [
        k for k, lm in enumerate(leads)
        if not any(divides(leads[o], lm) and (leads[o] != lm or o < k) for o in range(len(leads)) if o != k)
    ]
    minimal = [basis[k] for k in keep]
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        lm = order.leading(g)
        tail = _reduce(g + Poly.monomial(lm), others, [order.leading(o) for o in others], order)
        reduced.append(tail + Poly.monomial(lm))
    reduced.sort(key=lambda g: order.key(order.leading(g)))
    return GroebnerBasis(tuple(reduced), order, nvars)


# --- dense linear algebra over GF(2); rows are int bitmasks ---

def gf2_rank(rows: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in pivots:
                r ^= pivots[top]
            else:
                pivots[top] = r
                rank += 1
                break
    return rank


def gf2_solve(columns: Sequence[int], target: int) -> list[int] | None:
    """Find a subset of ``columns`` (bitmask vectors) summing to ``target``.

    Returns the indices of one such subset, or None if ``target`` is outside
    the span.
    """
    pivots: dict[int, tuple[int, int]] = {}  # top bit -> (vector, combination mask)
    for idx, c in enumerate(columns):
        combo = 1 << idx
        while c:
            top = c.bit_length() - 1
            if top in pivots:
                v, cm = pivots[top]
                c ^= v
                combo ^= cm
            else:
                pivots[top] = (c, combo)
                break
    combo = 0
    t = target
    while t:
        top = t.bit_length() - 1
        if top not in pivots:
            return None
        v, cm = pivots[top]
        t ^= v
        combo ^= cm
    return [i for i in range(len(columns)) if combo >> i & 1]


def gf2_inverse(matrix: Sequence[Sequence[int]]) -> list[list[int]]:
    """Inverse of a square 0/1 matrix over GF(2); raises if singular."""
    n = len(matrix)
    rows = [sum((matrix[i][j] & 1) << j for j in range(n)) | (1 << (n + i)) for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r] >> col & 1), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix over GF(2)")
        rows[col], rows[piv] = rows[piv], rows[col]
        for r in range(n):
            if r != col and rows[r] >> col & 1:
                rows[r] ^= rows[col]
    return [[rows[i] >> (n + j) & 1 for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class QuotientAlgebra:
    """GF(2)[generators] / (relations), graded by generator degrees."""

    names: tuple[str, ...]
    degrees: tuple[int, ...]
    gb: GroebnerBasis = field(repr=False)

    @classmethod
    def build(cls, names: Sequence[str], degrees: Sequence[int], relations: Sequence[Poly]) -> "QuotientAlgebra":
        if len(names) != len(degrees):
            raise GeneratorMismatch("one degree per generator name")
        return cls(tuple(names), tuple(degrees), buchberger(relations, degrees))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def gen(self, name: str, power: int = 1) -> Poly:
        return Poly.var(self.nvars, self.names.index(name), power)

    def one(self) -> Poly:
        return Poly.one(self.nvars)

    def zero(self) -> Poly:
        return Poly.zero(self.nvars)

    def reduce(self, p: Poly) -> Poly:
        return self.gb.normal_form(p)

    def mul(self, a: Poly, b: Poly) -> Poly:
        return self.reduce(a * b)

    def degree(self, m: Monomial) -> int:
        return monomial_degree(m, self.degrees)

    def basis(self, degree: int) -> list[Monomial]:
        return self.gb.standard_monomials(degree)
