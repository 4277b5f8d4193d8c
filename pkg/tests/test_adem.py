import pytest
import sympy

from quantum_steenrod.adem import (
    admissible_pairs,
    adem_rhs,
    bd8_ring,
    bs4_ring,
    even_case_coefficients,
    expansion_coefficient,
    fact1_coefficient,
    fact1_solve,
    lemma72_check,
    pi_star,
    pi_star_basis,
    qq_classical,
    quantum_adem_defect,
    reconstruct_composition,
    solve_in_pi_star_span,
    verify_adem,
    verify_qq_identity,
)
from quantum_steenrod.elements import HTElement
from quantum_steenrod.gf2poly import Poly, gf2_rank, monomials_of_degree
from quantum_steenrod.qsteenrod import QuantumSquares, cpn_engine
from quantum_steenrod.specfile import BUILTINS, load_spec
from quantum_steenrod.steenrod import SteenrodSquares

SQ = {name: SteenrodSquares(load_spec(name).ring()) for name in BUILTINS}
e_, s2_ = sympy.symbols("e s2")


def test_pi_star_examples():
    n2 = Poly(2, [(1, 0)])
    c3 = Poly(2, [(0, 1)])
    assert pi_star(n2) == Poly(2, [(0, 1), (2, 0)])
    assert pi_star(n2 * n2) == Poly(2, [(0, 2), (4, 0)])
    assert pi_star(c3 * c3) == Poly(2, [(2, 2)])
    n1 = Poly(3, [(1, 0, 0)])
    assert pi_star(n1, reduced=False) == Poly(3, [(0, 1, 0)])
    # n1 c3 = 0 upstairs maps to s1 e s2 = 0 downstairs
    assert pi_star(Poly(3, [(1, 0, 1)]), reduced=False) == Poly.zero(3)


def test_group_rings():
    bd8 = bd8_ring()
    assert bd8.reduce(Poly(3, [(2, 1, 1)])) == Poly.zero(3)
    bs4 = bs4_ring()
    assert bs4.reduce(Poly(3, [(1, 1, 1)])) == Poly.zero(3)
    assert bd8_ring(reduced=True).basis(2) == [(2, 0), (0, 1)]


def test_pi_star_homomorphism():
    bs4 = bs4_ring()
    monos = [m for d in range(0, 9) for m in bs4.basis(d)]
    for a in monos[:20]:
        for b in monos[:20]:
            pa, pb = Poly.monomial(a), Poly.monomial(b)
            assert pi_star(bs4.reduce(pa * pb), reduced=False) == bd8_ring().reduce(
                pi_star(pa, reduced=False) * pi_star(pb, reduced=False))


def test_pi_star_injective_up_to_degree_20():
    for d in range(21):
        src = list(monomials_of_degree((2, 3), d))
        rows = []
        tgt = list(monomials_of_degree((1, 2), d))
        pos = {m: k for k, m in enumerate(tgt)}
        for m in src:
            img = pi_star(Poly.monomial(m))
            rows.append(sum(1 << pos[t] for t in img))
        assert gf2_rank(rows) == len(src)


def test_expansion_coefficient_oracle():
    for a in range(8):
        for b in range(6):
            expr = sympy.Poly(sympy.expand((s2_ + e_**2) ** a * (e_ * s2_) ** b), e_, s2_, modulus=2)
            coeffs = {m: int(c) % 2 for m, c in expr.terms()}
            for i in range(2 * a + b + 1):
                for j in range(a + b + 1):
                    assert expansion_coefficient(a, b, i, j) == coeffs.get((i, j), 0)


def test_fact1_coefficient_oracle():
    for i in range(0, 21):
        for j in range(0, 21 - i):
            for k in range(0, (i + j) // 3 + 1):
                expr = sympy.Poly(sympy.expand((e_ * s2_) ** (2 * k) * (e_**2 + s2_) ** (i + j - 3 * k)),
                                  e_, s2_, modulus=2)
                coeffs = {m: int(c) % 2 for m, c in expr.terms()}
                assert fact1_coefficient(i, j, k) == coeffs.get((2 * i, j), 0)
                assert fact1_coefficient(i, j, k) == expansion_coefficient(i + j - 3 * k, 2 * k, 2 * i, j)


def test_qq_examples():
    sq2 = SQ["cpn:2"]
    q = qq_classical(Poly.var(1, 0), sq2)
    assert q.terms == {((1,), 2, 2), ((2,), 0, 2), ((2,), 4, 0)}
    q = qq_classical(Poly.one(1), sq2)
    assert q.terms == {((0,), 0, 0)}
    q = qq_classical(Poly.var(1, 0), SQ["cpn:1"])
    assert q.terms == {((1,), 2, 2)}


@pytest.mark.parametrize("name", BUILTINS)
def test_qq_bidegree(name):
    sq = SQ[name]
    for m in sq.ring.basis_classes:
        d = sq.ring.degree(m)
        for c, i, j in qq_classical(Poly.monomial(m), sq).terms:
            assert sq.ring.degree(c) + i + 2 * j == 4 * d


def test_fact1_examples():
    rep = fact1_solve(qq_classical(Poly.var(1, 0), SQ["cpn:2"]))
    assert rep.ok
    assert rep.preimage == {(1,): {(0, 2)}, (2,): {(2, 0)}}
    assert solve_in_pi_star_span({(1, 0)}) is None
    assert solve_in_pi_star_span(set()) == set()


@pytest.mark.parametrize("name", BUILTINS)
def test_fact1_and_reconstruction(name):
    sq = SQ[name]
    ring = sq.ring
    for m in ring.basis_classes:
        a = Poly.monomial(m)
        d = ring.degree(m)
        rep = fact1_solve(qq_classical(a, sq))
        assert rep.ok
        for p in range(d + 1):
            for q in range(d + p + 1):
                assert reconstruct_composition(rep, ring.nvars, d, p, q) == sq.compose(a, q, p)


def test_even_case_coefficients_match_expansion():
    for d in range(0, 13):
        for p in range(0, d + 1):
            for q in range(0, 2 * p, 2):
                if (d - p) % 2:
                    continue
                l, m = d - p, p - q // 2
                for a, b, c in even_case_coefficients(d, p, q):
                    assert c == expansion_coefficient(a, b, l + 2 * m, l)
                    assert 2 * a + 3 * b == 3 * l + 2 * m
    with pytest.raises(ValueError):
        even_case_coefficients(3, 2, 1)


def test_pi_star_basis():
    assert pi_star_basis(6) == [(3, 0), (0, 2)]
    assert pi_star_basis(1) == []


def test_binomial_identity_grid():
    assert lemma72_check(1, 0)
    assert lemma72_check(1, 1)
    assert all(lemma72_check(m, s) for m in range(1, 31) for s in range(31))


@pytest.mark.parametrize(
    "p,q,expected",
    [(2, 1, [(1, (3, 0))]), (1, 1, []), (3, 2, [(1, (5, 0)), (1, (4, 1))])],
)
def test_adem_rhs(p, q, expected):
    assert adem_rhs(p, q) == expected


def test_adem_rhs_rejects_admissible():
    with pytest.raises(ValueError):
        adem_rhs(1, 2)
    with pytest.raises(ValueError):
        adem_rhs(0, 1)


@pytest.mark.parametrize("name", ["cpn:5", "p1xp1", "m05bar", "p1cubed", "cpn:10"])
def test_verify_adem(name):
    for p, q in admissible_pairs(12):
        rep = verify_adem(SQ[name], p, q)
        assert rep.ok, rep.failures


def test_verify_adem_detects_wrong_relation(monkeypatch):
    import quantum_steenrod.adem as adem

    # Sq^2 Sq^4 (x^3) = Sq^2 x^5 = x^6 on CP^10, so an empty right-hand side must fail
    monkeypatch.setattr(adem, "adem_rhs", lambda p, q: [])
    rep = adem.verify_adem(SQ["cpn:10"], 4, 2)
    assert not rep.ok
    assert any("x^3" in f for f in rep.failures)


@pytest.mark.parametrize("name", BUILTINS)
def test_qq_identity_energy_zero(name):
    sq = SQ[name]
    for m in sq.ring.basis_classes:
        for p, q in admissible_pairs(12):
            assert verify_qq_identity(sq, Poly.monomial(m), p, q)


def test_defect_cp2():
    e = cpn_engine(2)
    rep = quantum_adem_defect(e, HTElement.of((1,)), 2, 2)
    assert rep
    assert rep.energy_part(1) == HTElement.of((0,), 1)
    assert not rep.energy_part(0)
    assert rep.contributions[(1, 0)] == HTElement.of((0,), 1)


def test_defect_cp3_pinned():
    e = cpn_engine(3)
    assert not quantum_adem_defect(e, HTElement.of((1,)), 2, 2)


@pytest.mark.parametrize("eng", [cpn_engine(n) for n in range(1, 6)] + [QuantumSquares(load_spec("p1xp1").quantum())],
                         ids=lambda e: e.ring.name)
def test_defect_energy_zero_vanishes(eng):
    for m in eng.ring.basis_classes:
        for p, q in admissible_pairs(8):
            rep = quantum_adem_defect(eng, HTElement.of(m), p, q)
            assert not rep.energy_part(0)


def test_defect_equals_quantum_sq_compositions():
    """The (b, d) sum agrees with composing the h-graded QSq^k operations."""
    e = cpn_engine(3)
    for m in e.ring.basis_classes:
        for p, q in admissible_pairs(8):
            x = HTElement.of(m)
            direct = e.quantum_sq(e.quantum_sq(x, p), q)
            for _, (u, s) in adem_rhs(p, q):
                direct = direct + e.quantum_sq(e.quantum_sq(x, s), u)
            assert quantum_adem_defect(e, x, p, q).total == direct
