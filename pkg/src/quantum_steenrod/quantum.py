"""Quantum cohomology over the Novikov variable T = t^N, |T| = 2N.

Structure constants are input data: for each ordered pair of basis classes
(a, b) a list of ``(gamma, curve_label, k)`` entries meaning that ``gamma T^k``
appears in ``a * b`` through spheres in the class ``curve_label`` of energy k.
The energy-zero part is always the cup product of the underlying ring.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .elements import HTElement
from .gf2poly import Monomial
from .rings import RingPresentation

JMAX_ENV = "QSTEENROD_JMAX"

Constant = tuple[Monomial, str, int]  # (gamma, curve label, energy)


class QuantumStructureError(ValueError):
    pass


@dataclass(frozen=True)
class CurveClass:
    """A curve class mu with c_1(mu) and the mod-2 numbers n(x, mu_2).

    ``intersections`` maps generator names of degree 2 to 0/1; missing
    generators count as 0.
    """

    label: str
    chern: int
    intersections: Mapping[str, int] = field(default_factory=dict)
    h2: tuple[int, ...] = ()

    def energy(self, N: int) -> int:
        if self.chern <= 0 or self.chern % N:
            raise QuantumStructureError(f"curve class {self.label}: c1 = {self.chern} is not a positive multiple of N = {N}")
        return self.chern // N


@dataclass
class ValidationReport:
    failures: list[str] = field(default_factory=list)
    checked: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def __str__(self) -> str:
        head = "PASS" if self.ok else f"FAIL ({len(self.failures)} problems)"
        return "\n".join([head] + self.failures[:20])


class QuantumStructure:
    def __init__(
        self,
        ring: RingPresentation,
        N: int,
        curve_classes: Iterable[CurveClass],
        constants: Mapping[tuple[Monomial, Monomial], Iterable[Constant]],
        jmax: int | None = None,
    ):
        if N <= 0:
            raise QuantumStructureError("minimal Chern number must be positive")
        self.ring = ring
        self.N = N
        self.curve_classes = {c.label: c for c in curve_classes}
        self.quantum_constants: dict[tuple[Monomial, Monomial], frozenset[Constant]] = {
            key: frozenset(v) for key, v in constants.items() if v
        }
        if jmax is None:
            env = os.environ.get(JMAX_ENV)
            jmax = int(env) if env else self.default_jmax()
        self.jmax = jmax

    def default_jmax(self) -> int:
        # enough for QS (degree doubling) composed twice
        return math.ceil(4 * self.ring.top_degree / (2 * self.N)) + 2

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def energy(self, label: str) -> int:
        return self.curve_classes[label].energy(self.N)

    def intersection(self, x: Monomial, label: str) -> int:
        """n(x, mu_2) for a degree-2 basis monomial x (a single generator)."""
        names = [self.ring.names[i] for i, e in enumerate(x) if e]
        if len(names) != 1 or sum(x) != 1:
            raise QuantumStructureError(f"n(x, mu) needs a degree-2 generator, got {self.ring.format(x)}")
        return self.curve_classes[label].intersections.get(names[0], 0) & 1

    def term_degree(self, m: Monomial, t: int, h: int = 0) -> int:
        return self.ring.degree(m) + 2 * self.N * t + h

    def degree(self, a: HTElement) -> int:
        degs = {self.term_degree(*x) for x in a}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element: degrees {sorted(degs)}")
        return degs.pop() if degs else 0

    @cached_property
    def _table(self) -> dict[tuple[Monomial, Monomial], list[tuple[Monomial, int]]]:
        """(a, b) -> [(gamma, k)] over all energies, classical part included."""
        table: dict[tuple[Monomial, Monomial], list[tuple[Monomial, int]]] = {}
        basis = self.ring.basis_classes
        for a in basis:
            for b in basis:
                out: set[tuple[Monomial, int]] = {(g, 0) for g in self.ring.cup_monomials(a, b).terms}
                for g, label, k in self.quantum_constants.get((a, b), ()):
                    if k > 0:
                        out ^= {(g, k)}
                table[(a, b)] = sorted(out)
        return table

    def product_monomials(self, a: Monomial, b: Monomial) -> list[tuple[Monomial, int]]:
        return self._table[(a, b)]

    def quantum_product(self, a: HTElement, b: HTElement) -> HTElement:
        """a * b, extended Z/2[[T]]- and h-linearly; T-exponents above jmax are dropped."""
        self.degree(a)
        self.degree(b)
        out: set = set()
        for m1, t1, h1 in a:
            for m2, t2, h2 in b:
                for g, k in self._table[(m1, m2)]:
                    t = t1 + t2 + k
                    if t <= self.jmax:
                        out ^= {(g, t, h1 + h2)}
        return HTElement(self.nvars, out)

    def product_restricted(self, a: HTElement, b: HTElement, label: str, k: int) -> HTElement:
        """Coefficient of T^k in a * b using spheres in class ``label`` only.

        No T^k factor is attached: the result sits at the T-exponents of the
        inputs.  ``label=None`` with ``k=0`` selects the cup product.
        """
        if label is None:
            if k != 0:
                raise QuantumStructureError("the zero class has energy 0")
            return self.ring.cup_elements(a, b)
        if k != self.energy(label):
            raise QuantumStructureError(f"curve class {label} has energy {self.energy(label)}, not {k}")
        out: set = set()
        for m1, t1, h1 in a:
            for m2, t2, h2 in b:
                for g, lab, kk in self.quantum_constants.get((m1, m2), ()):
                    if lab == label and kk == k:
                        out ^= {(g, t1 + t2, h1 + h2)}
        return HTElement(self.nvars, out)

    def positive_energy_classes(self) -> list[tuple[str, int]]:
        return sorted((label, self.energy(label)) for label in self.curve_classes)

    def classical_truncation(self) -> "QuantumStructure":
        return QuantumStructure(self.ring, self.N, self.curve_classes.values(), {}, self.jmax)


def validate_quantum(qs: QuantumStructure, check_associativity: bool = True) -> ValidationReport:
    """Degree homogeneity, k=0 constants vs cup, commutativity, associativity, unit."""
    rep = ValidationReport()
    ring = qs.ring
    fmt = ring.format
    basis = ring.basis_classes
    for label, c in qs.curve_classes.items():
        try:
            c.energy(qs.N)
        except QuantumStructureError as exc:
            rep.fail(str(exc))
    for (a, b), consts in qs.quantum_constants.items():
        if a not in ring.index or b not in ring.index:
            rep.fail(f"constant on non-basis pair ({fmt(a)}, {fmt(b)})")
            continue
        zero_part = set()
        for g, label, k in consts:
            if g not in ring.index:
                rep.fail(f"output {fmt(g)} of ({fmt(a)}, {fmt(b)}) is not a basis class")
                continue
            if k == 0:
                zero_part.add(g)
                continue
            if label not in qs.curve_classes:
                rep.fail(f"unknown curve class {label!r} at ({fmt(a)}, {fmt(b)})")
                continue
            try:
                if qs.energy(label) != k:
                    rep.fail(f"({fmt(a)}, {fmt(b)}) -> {fmt(g)}: energy {k} but class {label} has energy {qs.energy(label)}")
            except QuantumStructureError:
                pass
            lhs = ring.degree(a) + ring.degree(b)
            rhs = ring.degree(g) + 2 * qs.N * k
            if lhs != rhs:
                rep.fail(f"degree: |{fmt(a)}| + |{fmt(b)}| = {lhs} but |{fmt(g)} T^{k}| = {rhs}")
        if zero_part and zero_part != set(ring.cup_monomials(a, b).terms):
            rep.fail(f"energy-0 constants of ({fmt(a)}, {fmt(b)}) disagree with the cup product")
    rep.checked["constants"] = sum(len(v) for v in qs.quantum_constants.values())

    el = {m: HTElement.of(m) for m in basis}
    one = HTElement.of(ring.unit())
    for a in basis:
        if qs.quantum_product(one, el[a]) != el[a] or qs.quantum_product(el[a], one) != el[a]:
            rep.fail(f"unit: 1 * {fmt(a)} != {fmt(a)}")
        for b in basis:
            if qs.quantum_product(el[a], el[b]) != qs.quantum_product(el[b], el[a]):
                rep.fail(f"commutativity fails at ({fmt(a)}, {fmt(b)})")
    rep.checked["pairs"] = len(basis) ** 2
    if check_associativity:
        prods = {(a, b): qs.quantum_product(el[a], el[b]) for a in basis for b in basis}
        for a in basis:
            for b in basis:
                for c in basis:
                    left = qs.quantum_product(prods[(a, b)], el[c])
                    right = qs.quantum_product(el[a], prods[(b, c)])
                    if left != right:
                        rep.fail(f"associativity fails at ({fmt(a)}, {fmt(b)}, {fmt(c)})")
        rep.checked["triples"] = len(basis) ** 3
    return rep


def cpn_structure(n: int) -> QuantumStructure:
    """QH*(CP^n) = Z/2[x, T]/(x^{n+1} = T), one line class with c1 = n+1."""
    from .gf2poly import Poly

    ring = RingPresentation(f"CP^{n}", [("x", 2)], [Poly.var(1, 0, n + 1)], 2 * n)
    consts = {}
    for a in range(n + 1):
        for b in range(n + 1):
            if a + b > n:
                consts[((a,), (b,))] = [((a + b - n - 1,), "line", 1)]
    line = CurveClass("line", n + 1, {"x": 1}, (1,))
    return QuantumStructure(ring, n + 1, [line], consts)


def product_p1_structure(k: int, names: tuple[str, ...] | None = None) -> QuantumStructure:
    """(CP^1)^k: x_i^2 = T, with curve classes the sums of the factor lines."""
    from itertools import combinations

    from .gf2poly import Poly

    names = names or (("x", "y", "z")[:k] if k <= 3 else tuple(f"x{i}" for i in range(k)))
    ring = RingPresentation(
        "CP^1" + "xCP^1" * (k - 1),
        [(nm, 2) for nm in names],
        [Poly.var(k, i, 2) for i in range(k)],
        2 * k,
    )
    classes = []
    label_of = {}
    for r in range(1, k + 1):
        for subset in combinations(range(k), r):
            label = "+".join(f"mu_{names[i]}" for i in subset)
            label_of[subset] = label
            classes.append(CurveClass(label, 2 * r, {names[i]: 1 for i in subset},
                                      tuple(1 if i in subset else 0 for i in range(k))))
    consts = {}
    for a in ring.basis_classes:
        for b in ring.basis_classes:
            overlap = tuple(i for i in range(k) if a[i] and b[i])
            if overlap:
                g = tuple((a[i] + b[i]) % 2 for i in range(k))
                consts[(a, b)] = [(g, label_of[overlap], len(overlap))]
    return QuantumStructure(ring, 2, classes, consts)
