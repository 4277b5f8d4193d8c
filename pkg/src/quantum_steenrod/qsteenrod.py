"""Quantum Steenrod squares QS: QH*(M) -> QH*(M)[h].

Three routes are provided for CP^n (closed form, Pascal recurrence and the
general engine) and one general route for rings generated in degree 2 with
known quantum structure constants:

    QS(x)     = x h^2 + x * x                 for |x| = 2
    QS(b * x) = QS(b) * QS(x) + q(b, x)       (quantum Cartan)
    QS(a T^j) = QS(a) T^{2j}

where the correction q(b, x) sums, over curve classes mu of energy k >= 1
and components z h^i T^l of QS(b), the terms n(x, mu) (z *_{mu,k} x) T^{l+k}.
The h-exponent of each such term is fixed by degree: the whole correction
has degree 2(|b| + 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .elements import HTElement
from .gf2poly import Monomial, Poly, divides, lucas_binom, monomial_div
from .quantum import QuantumStructure, cpn_structure
from .steenrod import SteenrodSquares


class CorrectionError(ValueError):
    pass


class NotFactorizable(ValueError):
    pass


# --- CP^n: closed form and recurrence ---

def _cpn_power(n: int, p: int) -> tuple[Monomial, int]:
    """The p-th quantum power of x in CP^n as (class, T-exponent)."""
    t, r = divmod(p, n + 1)
    return (r,), t


def qs_cpn_closed(i: int, n: int) -> HTElement:
    """QS(x^i) on CP^n from the closed-form binomial sum."""
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    terms = []
    for j in range(i + 1):
        c = lucas_binom(i, j)
        for k in range(n // 2 + 2):
            c ^= lucas_binom(n - k, k) & lucas_binom(i - (n + 1 - k), j - k)
        if c:
            m, t = _cpn_power(n, i + j)
            terms.append((m, t, 2 * (i - j)))
    return HTElement(1, terms)


def cpn_recurrence_coefficients(n: int) -> list[list[int]]:
    """Rows l^i (i = 0..n) with QS(x^i) = sum_j l^i_j x^{i+j} h^{2(i-j)}."""
    rows = [[1]]
    for i in range(n):
        prev = rows[-1] + [0]
        row = [prev[j] ^ (prev[j - 1] if j else 0) for j in range(i + 2)]
        j = n - i
        if 0 <= j <= i + 1:
            row[j] ^= lucas_binom(i, n - i)
        rows.append(row)
    return rows


def qs_cpn_recurrence(n: int) -> dict[int, HTElement]:
    if n < 1:
        raise ValueError("n must be positive")
    table = {}
    for i, row in enumerate(cpn_recurrence_coefficients(n)):
        terms = []
        for j, c in enumerate(row):
            if c:
                m, t = _cpn_power(n, i + j)
                terms.append((m, t, 2 * (i - j)))
        table[i] = HTElement(1, terms)
    return table


def cpn_correction(i: int, n: int) -> HTElement:
    """q(W)(x^i, x) on CP^n in closed form: C(i, n-i) T h^{4i+2-2n} when 2i >= n."""
    if 2 * i < n or not lucas_binom(i, n - i):
        return HTElement.zero(1)
    return HTElement.of((0,), 1, 4 * i + 2 - 2 * n)


# --- general engine ---

@dataclass
class CartanReport:
    lhs: HTElement
    rhs: HTElement
    correction: HTElement

    @property
    def mismatch(self) -> HTElement:
        return self.lhs + self.rhs

    @property
    def ok(self) -> bool:
        return not self.mismatch


class QuantumSquares:
    """Table of QS on basis classes, built recursively by degree."""

    def __init__(self, qstruct: QuantumStructure, order: Iterable[int] | None = None):
        self.qstruct = qstruct
        self.ring = qstruct.ring
        self.sq = SteenrodSquares(self.ring)
        self.N = qstruct.N
        self.generator_order = list(order) if order is not None else list(range(self.ring.nvars))
        self.table: dict[Monomial, HTElement] = {}
        self.provenance: dict[Monomial, str] = {}
        self.factorization: dict[Monomial, tuple[Monomial, Monomial]] = {}
        self._build()

    def _factor(self, a: Monomial) -> tuple[Monomial, Monomial]:
        for i in self.generator_order:
            if a[i]:
                x = tuple(1 if k == i else 0 for k in range(len(a)))
                b = monomial_div(a, x)
                if b in self.ring.index:
                    return b, x
        raise NotFactorizable(f"{self.ring.format(a)} is not b * x with b a basis class and |x| = 2")

    def _build(self) -> None:
        ring = self.ring
        for d in sorted(ring.basis):
            for a in ring.basis[d]:
                if d == 0:
                    self.table[a] = HTElement.of(a)
                    self.provenance[a] = "unit"
                elif d == 2:
                    x = HTElement.of(a)
                    self.table[a] = x.shift(h=2) + self.qstruct.quantum_product(x, x)
                    self.provenance[a] = "base"
                else:
                    b, x = self._factor(a)
                    self.factorization[a] = (b, x)
                    self.table[a] = self._cartan_step(a, b, x)
                    self.provenance[a] = "cartan-recursion"

    def _cartan_step(self, a: Monomial, b: Monomial, x: Monomial) -> HTElement:
        prod = self.qstruct.quantum_product(HTElement.of(b), HTElement.of(x))
        if prod.t_part(0) != HTElement.of(a):
            raise NotFactorizable(f"classical part of {self.ring.format(b)} * {self.ring.format(x)} is not {self.ring.format(a)}")
        val = self.qstruct.quantum_product(self.table[b], self.table[x]) + self.q_correction(b, x)
        # QS(b * x) = QS(a) + sum QS(c) T^{2t} over the T-terms c T^t of b * x
        for c, t, _ in prod:
            if t:
                val = val + self.table[c].shift(t=2 * t)
        return val

    def as_element(self, a) -> HTElement:
        if isinstance(a, HTElement):
            return a
        if isinstance(a, Poly):
            return HTElement.from_poly(self.ring.reduce(a))
        return HTElement.of(tuple(a))

    def qs(self, a) -> HTElement:
        """QS of an element of QH*(M); QS(c T^j) = QS(c) T^{2j}."""
        a = self.as_element(a)
        out = HTElement.zero(self.ring.nvars)
        for m, t, h in a:
            if h:
                raise ValueError("QS is defined on QH*(M); input has an h-term")
            out = out + self.table[m].shift(t=2 * t)
        return out

    def q_correction(self, b, x) -> HTElement:
        """The quantum Cartan correction q(b, x) for |x| = 2."""
        b = self.as_element(b)
        x = self.as_element(x)
        out = HTElement.zero(self.ring.nvars)
        for xm, xt, xh in x:
            if self.ring.degree(xm) != 2 or xh:
                raise CorrectionError("second argument of q(b, x) must have degree 2")
            for bm, bt, bh in b:
                term = self._correction_basis(bm, xm)
                out = out + term.shift(t=2 * bt + xt)
        return out

    def _correction_basis(self, b: Monomial, x: Monomial) -> HTElement:
        qs = self.qstruct
        target = 2 * (self.ring.degree(b) + 2)
        qsb = self.table[b]
        xel = HTElement.of(x)
        terms = []
        for label, k in qs.positive_energy_classes():
            if not qs.intersection(x, label):
                continue
            for z, l, i in qsb:
                restricted = qs.product_restricted(HTElement.of(z), xel, label, k)
                for w, _, _ in restricted:
                    h = target - qs.term_degree(w, l + k)
                    if h < 2:
                        raise CorrectionError(
                            f"q({self.ring.format(b)}, {self.ring.format(x)}): forced h-exponent {h} < 2 "
                            f"for {self.ring.format(w)} T^{l + k}"
                        )
                    terms.append((w, l + k, h))
        return HTElement(self.ring.nvars, terms)

    def verify_quantum_cartan(self, x, y) -> CartanReport:
        """QS(x * y) == QS(x) * QS(y) + q(x, y), for |y| = 2."""
        x = self.as_element(x)
        y = self.as_element(y)
        lhs = self.qs(self.qstruct.quantum_product(x, y))
        corr = self.q_correction(x, y)
        rhs = self.qstruct.quantum_product(self.qs(x), self.qs(y)) + corr
        return CartanReport(lhs, rhs, corr)

    # -- coefficient extraction --

    def qs_component(self, a, i: int, j: int) -> Poly:
        """QS_{i,j}(a): the class multiplying h^i T^j."""
        return self.qs(a).coefficient(i, j)

    def qs_component_ab(self, a, deg_shift: int, t_shift: int) -> HTElement:
        """QS^{a,b}: terms of QS(x T^i) in T^{b+i} H^{|x|+a}, for a single term x T^i."""
        a = self.as_element(a)
        if len(a) != 1:
            raise ValueError("QS^{a,b} is indexed on a single class x T^i")
        (m, ti, _), = a.terms
        target = self.ring.degree(m) + deg_shift
        return HTElement(
            self.ring.nvars,
            [(w, t, 0) for w, t, h in self.qs(a) if t == t_shift + ti and self.ring.degree(w) == target],
        )

    def quantum_sq(self, z, k: int) -> HTElement:
        """sum_b QS^{k - 2bN, b}(z), extended linearly over the terms of z.

        Equivalently the h^{deg(z) - k} coefficient of QS(z), where deg counts
        |T| = 2N.
        """
        z = self.as_element(z)
        out = HTElement.zero(self.ring.nvars)
        for term in z:
            single = HTElement(self.ring.nvars, [term])
            bmax = (self.ring.degree(term[0]) + k) // (2 * self.N) if k >= 0 else -1
            for b in range(0, max(bmax, -1) + 1):
                out = out + self.qs_component_ab(single, k - 2 * b * self.N, b)
        return out

    # -- characteristic classes --

    def quantum_stiefel_whitney(self) -> HTElement:
        """w_Q(TM) = sum_y QS(y) <Sq(y^dual), [M]>."""
        ring = self.ring
        out = HTElement.zero(ring.nvars)
        for y in ring.basis_classes:
            ev = ring.evaluate_element(self.sq.sq(ring.dual_basis[y]))
            for _, _, h in ev:
                out = out + self.table[y].shift(h=h)
        return out


def cpn_engine(n: int) -> QuantumSquares:
    return QuantumSquares(cpn_structure(n))


def qs_table_from(rows: dict[int, HTElement]) -> dict[Monomial, HTElement]:
    return {(i,): v for i, v in rows.items()}


__all__ = [
    "CartanReport", "CorrectionError", "NotFactorizable", "QuantumSquares",
    "cpn_correction", "cpn_engine", "cpn_recurrence_coefficients", "qs_cpn_closed",
    "qs_cpn_recurrence", "qs_table_from", "divides",
]
