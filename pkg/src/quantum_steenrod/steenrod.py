"""Classical total Steenrod square on rings generated in degree 2.

For a degree-2 class x with no odd cohomology around, Sq(x) = x h^2 + x^2.
Cartan makes Sq a ring map, so on a monomial it is the product of the
generator squares.  We compute that in the free polynomial ring and reduce,
after checking that the relation ideal is closed under Sq (otherwise the
answer would depend on the representative).
"""

from __future__ import annotations

from functools import cached_property

from .elements import HTElement
from .gf2poly import Monomial, Poly, lucas_binom
from .rings import RingPresentation


class UnsupportedRing(ValueError):
    pass


class NotSqClosed(ValueError):
    pass


def sq_free_monomial(m: Monomial) -> dict[int, set[Monomial]]:
    """Sq of a monomial in the free ring: h-exponent -> set of monomials."""
    # Sq(g^e) = g^e * sum_j C(e, j) g^j h^{2(e-j)}
    parts: dict[int, set[Monomial]] = {0: {tuple(0 for _ in m)}}
    for i, e in enumerate(m):
        if not e:
            continue
        nxt: dict[int, set[Monomial]] = {}
        for j in range(e + 1):
            if not lucas_binom(e, j):
                continue
            dh = 2 * (e - j)
            for h, monos in parts.items():
                bucket = nxt.setdefault(h + dh, set())
                for mono in monos:
                    new = list(mono)
                    new[i] += e + j
                    bucket ^= {tuple(new)}
        parts = nxt
    return {h: s for h, s in parts.items() if s}


class SteenrodSquares:
    """Sq on a ring presentation whose generators all have degree 2."""

    def __init__(self, ring: RingPresentation):
        bad = [n for n, d in ring.generators if d != 2]
        if bad:
            raise UnsupportedRing(f"{ring.name}: Sq is only implemented for degree-2 generators (not {', '.join(bad)})")
        self.ring = ring
        failures = self.relation_closure_failures()
        if failures:
            raise NotSqClosed(f"{ring.name}: relation ideal is not closed under Sq: " + "; ".join(failures))

    def sq_free(self, p: Poly) -> dict[int, Poly]:
        out: dict[int, Poly] = {}
        for m in p:
            for h, monos in sq_free_monomial(m).items():
                out[h] = out.get(h, Poly.zero(self.ring.nvars)) + Poly(self.ring.nvars, monos)
        return {h: q for h, q in out.items() if q}

    def relation_closure_failures(self) -> list[str]:
        """Relations r whose Sq has some h-component outside the ideal."""
        bad = []
        for r in self.ring.relations:
            for h, comp in sorted(self.sq_free(r).items()):
                if self.ring.reduce(comp):
                    bad.append(f"h^{h} part of Sq({self.ring.format(r)}) is {self.ring.format(self.ring.reduce(comp))}")
        return bad

    def sq_generator(self, name: str) -> HTElement:
        x = self.ring.gen(name)
        return self.sq(x)

    def sq(self, p: Poly) -> HTElement:
        """Total square of a class given by any polynomial representative."""
        out = HTElement.zero(self.ring.nvars)
        for h, comp in self.sq_free(p).items():
            out = out + HTElement.from_poly(self.ring.reduce(comp), 0, h)
        return out

    @cached_property
    def table(self) -> dict[Monomial, HTElement]:
        return {m: self.sq(Poly.monomial(m)) for m in self.ring.basis_classes}

    def sq_element(self, a: HTElement) -> HTElement:
        """Sq applied h-linearly to an element of H*(M)[h] (T ignored)."""
        out = HTElement.zero(self.ring.nvars)
        for m, t, h in a:
            out = out + self.table[m].shift(t, h)
        return out

    def sq_component(self, p: Poly, i: int) -> Poly:
        """Sq^i(p), read off as the h^{|p| - i} coefficient."""
        if not p:
            return p
        d = self.ring.poly_degree(p)
        if i < 0 or i > d:
            return Poly.zero(self.ring.nvars)
        return self.sq(p).coefficient(d - i, 0)

    def compose(self, p: Poly, *ops: int) -> Poly:
        """Sq^{ops[0]} Sq^{ops[1]} ... (p), rightmost applied first."""
        for i in reversed(ops):
            if not p:
                return p
            p = self.sq_component(p, i)
        return p


def wu_class(sq: SteenrodSquares) -> HTElement:
    """v = sum_y y <Sq(y^dual), [M]>, with <a h, A> = <a, A> h."""
    ring = sq.ring
    out = HTElement.zero(ring.nvars)
    for y in ring.basis_classes:
        ev = ring.evaluate_element(sq.sq(ring.dual_basis[y]))
        for _, _, h in ev:
            out = out + HTElement.of(y, 0, h)
    return out


def stiefel_whitney(sq: SteenrodSquares) -> HTElement:
    """w(TM) = Sq(v), applied h-linearly."""
    return sq.sq_element(wu_class(sq))
