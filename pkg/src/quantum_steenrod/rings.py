"""Graded mod-2 cohomology rings given by generators and relations."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

from .elements import HTElement, format_monomial, format_poly
from .gf2poly import Monomial, Poly, QuotientAlgebra, gf2_inverse, monomial_mul


class PresentationError(ValueError):
    """The presentation does not describe a Poincare duality algebra."""


class RingPresentation:
    """H*(M; Z/2) = Z/2[generators] / (relations), with dim M = ``top_degree``.

    Construction computes a Groebner basis, the monomial basis in every degree
    and checks Poincare duality (H^top is one-dimensional, dimensions are
    symmetric, nothing above the top).  The fundamental class pairing is
    ``<m, [M]> = 1`` iff the normal form of ``m`` contains the top monomial.
    """

    def __init__(self, name: str, generators: Sequence[tuple[str, int]], relations: Iterable[Poly], top_degree: int):
        self.name = name
        self.generators = tuple((str(n), int(d)) for n, d in generators)
        self.relations = tuple(relations)
        self.top_degree = int(top_degree)
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator names")
        self.algebra = QuotientAlgebra.build(names, [d for _, d in self.generators], self.relations)
        self._build_basis()

    def _build_basis(self) -> None:
        basis = {d: self.algebra.basis(d) for d in range(self.top_degree + 1)}
        self.basis: dict[int, list[Monomial]] = {d: b for d, b in basis.items() if b}
        top = basis.get(self.top_degree, [])
        if len(top) != 1:
            raise PresentationError(f"{self.name}: H^{self.top_degree} has dimension {len(top)}, expected 1")
        self.top_monomial: Monomial = top[0]
        maxw = max((d for _, d in self.generators), default=1)
        for d in range(self.top_degree + 1, self.top_degree + maxw + 1):
            if self.algebra.basis(d):
                raise PresentationError(f"{self.name}: nonzero cohomology in degree {d} > {self.top_degree}")
        for d in range(self.top_degree + 1):
            a, b = len(basis[d]), len(basis[self.top_degree - d])
            if a != b:
                raise PresentationError(f"{self.name}: dim H^{d} = {a} but dim H^{self.top_degree - d} = {b}")

    # -- basic accessors --

    @property
    def names(self) -> tuple[str, ...]:
        return self.algebra.names

    @property
    def degrees(self) -> tuple[int, ...]:
        return self.algebra.degrees

    @property
    def nvars(self) -> int:
        return self.algebra.nvars

    @cached_property
    def basis_classes(self) -> list[Monomial]:
        """All basis monomials, by degree then by descending monomial order."""
        return [m for d in sorted(self.basis) for m in self.basis[d]]

    @cached_property
    def index(self) -> dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.basis_classes)}

    def degree(self, m: Monomial) -> int:
        return self.algebra.degree(m)

    def poly_degree(self, p: Poly) -> int:
        degs = p.degrees(self.degrees)
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous class {self.format(p)}")
        return degs.pop() if degs else 0

    def one(self) -> Poly:
        return self.algebra.one()

    def zero(self) -> Poly:
        return self.algebra.zero()

    def gen(self, name: str, power: int = 1) -> Poly:
        return self.algebra.gen(name, power)

    def unit(self) -> Monomial:
        return (0,) * self.nvars

    def reduce(self, p: Poly) -> Poly:
        return self.algebra.reduce(p)

    def format(self, p: Poly | Monomial) -> str:
        if isinstance(p, tuple):
            return format_monomial(p, self.names)
        return format_poly(p, self.names, self.algebra.gb.order.key)

    def generators_of_degree(self, d: int) -> list[int]:
        return [i for i, (_, deg) in enumerate(self.generators) if deg == d]

    # -- products and pairing --

    def cup(self, a: Poly, b: Poly) -> Poly:
        return self.reduce(a * b)

    def cup_monomials(self, a: Monomial, b: Monomial) -> Poly:
        return self.reduce(Poly.monomial(monomial_mul(a, b)))

    def evaluate(self, p: Poly) -> int:
        """``<p, [M]>``."""
        return 1 if self.top_monomial in self.reduce(p).terms else 0

    def pairing_matrix(self, d: int) -> list[list[int]]:
        rows = self.basis.get(d, [])
        cols = self.basis.get(self.top_degree - d, [])
        return [[self.evaluate(Poly.monomial(monomial_mul(a, b))) for b in cols] for a in rows]

    @cached_property
    def dual_basis(self) -> dict[Monomial, Poly]:
        """gamma -> gamma^dual with <gamma u beta^dual, [M]> = delta(gamma, beta)."""
        duals: dict[Monomial, Poly] = {}
        for d, rows in self.basis.items():
            cols = self.basis[self.top_degree - d]
            try:
                inv = gf2_inverse(self.pairing_matrix(d))
            except ZeroDivisionError:
                raise PresentationError(f"{self.name}: singular Poincare pairing in degree {d}") from None
            # P[a][b] = <a b>; the dual of row a is sum_b inv[b][a] * col_b
            for i, a in enumerate(rows):
                duals[a] = Poly(self.nvars, [cols[j] for j in range(len(cols)) if inv[j][i]])
        return duals

    # -- H*(M)[h] arithmetic --

    def element(self, terms: Iterable[tuple[Monomial, int, int]]) -> HTElement:
        """Build an element from arbitrary monomials, reducing each to normal form."""
        out: set = set()
        cache: dict[Monomial, Poly] = {}
        for m, t, h in terms:
            if m not in cache:
                cache[m] = self.reduce(Poly.monomial(m))
            for r in cache[m].terms:
                out ^= {(r, t, h)}
        return HTElement(self.nvars, out)

    def cup_elements(self, a: HTElement, b: HTElement) -> HTElement:
        """Classical product on H*(M)[h] (T-exponents simply add)."""
        return self.element(
            (monomial_mul(m1, m2), t1 + t2, h1 + h2) for m1, t1, h1 in a for m2, t2, h2 in b
        )

    def evaluate_element(self, a: HTElement) -> HTElement:
        """``<a, [M]>`` applied h- and T-linearly; returns an element of Z/2[T, h]."""
        return HTElement(self.nvars, [(self.unit(), t, h) for m, t, h in a if m == self.top_monomial])

    def __repr__(self) -> str:
        return f"RingPresentation({self.name!r})"
