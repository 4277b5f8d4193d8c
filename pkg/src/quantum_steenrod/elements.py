"""GF(2) linear combinations of ``class * T^j * h^i``.

``HTElement`` is the single carrier for H*(M)[h] (T-exponents all zero),
QH*(M) (h-exponents all zero) and QH*(M)[h].  Classes are basis monomials of
a ring presentation; multiplying two elements needs a product on classes and
therefore lives on the ring / quantum structure, not here.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Sequence

from .gf2poly import Monomial, Poly

Term = tuple[Monomial, int, int]  # (class, T-exponent, h-exponent)


class HTElement:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Iterable[Term] = ()):
        ts: set[Term] = set()
        for m, t, h in terms:
            if t < 0 or h < 0:
                raise ValueError(f"negative exponent in term {(m, t, h)}")
            ts ^= {(tuple(m), t, h)}
        self.nvars = nvars
        self.terms = frozenset(ts)

    @classmethod
    def zero(cls, nvars: int) -> "HTElement":
        return cls(nvars)

    @classmethod
    def one(cls, nvars: int) -> "HTElement":
        return cls(nvars, [((0,) * nvars, 0, 0)])

    @classmethod
    def from_poly(cls, p: Poly, t: int = 0, h: int = 0) -> "HTElement":
        return cls(p.nvars, [(m, t, h) for m in p.terms])

    @classmethod
    def of(cls, m: Sequence[int], t: int = 0, h: int = 0) -> "HTElement":
        return cls(len(m), [(tuple(m), t, h)])

    def __add__(self, other: "HTElement") -> "HTElement":
        if self.nvars != other.nvars:
            raise ValueError("generator-count mismatch")
        out = HTElement.__new__(HTElement)
        out.nvars = self.nvars
        out.terms = self.terms ^ other.terms
        return out

    __sub__ = __add__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HTElement):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, self.terms))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"HTElement({sorted(self.terms)})"

    def shift(self, t: int = 0, h: int = 0) -> "HTElement":
        """Multiply by ``T^t h^h``."""
        return HTElement(self.nvars, [(m, a + t, b + h) for m, a, b in self.terms])

    def where(self, pred: Callable[[Monomial, int, int], bool]) -> "HTElement":
        return HTElement(self.nvars, [x for x in self.terms if pred(*x)])

    def h_part(self, i: int) -> "HTElement":
        """Coefficient of h^i, as an h-free element."""
        return HTElement(self.nvars, [(m, t, 0) for m, t, h in self.terms if h == i])

    def t_part(self, j: int) -> "HTElement":
        """Coefficient of T^j, as a T-free element."""
        return HTElement(self.nvars, [(m, 0, h) for m, t, h in self.terms if t == j])

    def coefficient(self, h: int, t: int) -> Poly:
        """The class multiplying ``h^h T^t``."""
        return Poly(self.nvars, [m for m, a, b in self.terms if a == t and b == h])

    def set_h(self, value: int) -> "HTElement":
        """Evaluate h at 1 (``value=1``) or 0 (``value=0``), keeping T."""
        if value == 1:
            return HTElement(self.nvars, [(m, t, 0) for m, t, _ in self.terms])
        return self.where(lambda m, t, h: h == 0)

    def set_t(self, value: int) -> "HTElement":
        if value == 1:
            return HTElement(self.nvars, [(m, 0, h) for m, _, h in self.terms])
        return self.where(lambda m, t, h: t == 0)

    @property
    def h_exponents(self) -> set[int]:
        return {h for _, _, h in self.terms}

    @property
    def t_exponents(self) -> set[int]:
        return {t for _, t, _ in self.terms}

    def classes(self) -> Poly:
        """Sum of the classes with T and h set to 1."""
        return Poly(self.nvars, [m for m, _, _ in self.terms])


def format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_poly(p: Poly, names: Sequence[str], order_key=None) -> str:
    if not p:
        return "0"
    monos = sorted(p.terms, key=order_key, reverse=True) if order_key else sorted(p.terms, reverse=True)
    return " + ".join(format_monomial(m, names) for m in monos)


def format_term(m: Monomial, t: int, h: int, names: Sequence[str]) -> str:
    parts = []
    if any(m):
        parts.append(format_monomial(m, names))
    if t:
        parts.append("T" if t == 1 else f"T^{t}")
    if h:
        parts.append("h" if h == 1 else f"h^{h}")
    return " ".join(parts) if parts else "1"
