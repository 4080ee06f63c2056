import random
from fractions import Fraction

import pytest

from algebroid_forge.calculus import (
    FORM,
    MULTIVECTOR,
    BundleMorphism,
    identity_morphism,
    null_presentation,
    retag,
    tangent_algebroid,
)
from algebroid_forge.courant import (
    CourantSection,
    GeneralizedDirac,
    SectionFamily,
    SplitSubbundle,
    Submanifold,
    build_morphism_graph,
    check_generalized_dirac,
    check_split_dirac,
    conjugate,
    dorfman,
    flip,
    flip_section,
    pairing_sections,
    product,
    product_with_renaming,
    qlb_double,
    skew_bracket,
    standard_double,
    tangent_conormal_dirac,
    twisted_double,
    verify_courant_axioms,
)
from algebroid_forge.pn import (
    QuasiLieBialgebroid,
    build_qlb_from_pqn,
    deformed_presentation,
    nstar_pullback,
    qlb_from_closed3form,
    qlb_from_twisted_poisson,
)
from test_pn import an_presentation, diag, e6_conformal, std_pi, tr4_twisted

TR2 = tangent_algebroid(2)
TR3 = tangent_algebroid(3)
TR4 = tangent_algebroid(4)


def top_form(A):
    return A.section(FORM, 3, {(0, 1, 2): A.one_rf()})


class TestDorfman:
    def test_standard_mixed(self):
        E = standard_double(TR2)
        e1 = E.frame_section(0)
        e2 = E.coframe_section(1).scale(TR2.coord_rf("x1"))
        got = dorfman(E, e1, e2)
        assert got.vec.is_zero()
        assert got.cov == TR2.coframe(1)

    def test_standard_covectors_commute(self):
        E = standard_double(TR2)
        assert dorfman(E, E.coframe_section(0), E.coframe_section(1)).is_zero()

    def test_twisted_vector_pair(self):
        phi = top_form(TR3)
        E = twisted_double(TR3, phi)
        got = dorfman(E, E.frame_section(0), E.frame_section(1))
        assert got.vec.is_zero()
        assert got.cov == TR3.coframe(2)

    def test_qlb_double_of_closed3form_matches_twisted(self):
        phi = top_form(TR3)
        E_twisted = twisted_double(TR3, phi)
        Q = qlb_from_closed3form(TR3, phi)
        E_qlb = qlb_double(Q)
        assert flip(E_qlb) == E_twisted
        # Dorfman commutes with the flip on a sample of sections
        rng = random.Random(5)
        fam = SectionFamily(E_qlb, seed=1, samples=4, max_degree=1)
        for (l1, e1), (l2, e2) in fam.tuples(2)[:40]:
            lhs = flip_section(E_qlb, dorfman(E_qlb, e1, e2))
            rhs = dorfman(E_twisted, flip_section(E_qlb, e1), flip_section(E_qlb, e2))
            assert lhs == rhs

    def test_twisted_zero_is_standard(self):
        assert twisted_double(TR2, TR2.zero_section(FORM, 3)) == standard_double(TR2)

    def test_qlb_covector_pair_produces_three_section_term(self):
        # in the double of (A*, d_A, phi), two covector-side sections (the
        # d_i of the original chart) bracket to phi(d1, d2, -)
        phi = top_form(TR3)
        Q = qlb_from_closed3form(TR3, phi)
        E = qlb_double(Q)
        got = dorfman(E, E.coframe_section(0), E.coframe_section(1))
        assert got.cov.is_zero()
        assert retag(got.vec, TR3, FORM) == TR3.coframe(2)  # phi(d1,d2,-) = dx3


class TestSkew:
    def test_standard_example(self):
        E = standard_double(TR2)
        e1 = E.frame_section(0)
        e2 = E.coframe_section(1).scale(TR2.coord_rf("x1"))
        got = skew_bracket(E, e1, e2)
        assert got.cov == TR2.coframe(1)

    def test_restriction_to_vectors_is_bracket(self):
        E = standard_double(TR3)
        rng = random.Random(7)
        fam = SectionFamily(E, seed=2, samples=3, max_degree=1)
        from algebroid_forge.calculus import schouten

        for (l1, e1), (l2, e2) in fam.tuples(2)[:30]:
            pure1 = CourantSection(e1.vec, TR3.zero_section(FORM, 1))
            pure2 = CourantSection(e2.vec, TR3.zero_section(FORM, 1))
            got = skew_bracket(E, pure1, pure2)
            assert got.vec == schouten(e1.vec, e2.vec)

    def test_triangular_dual_bracket(self):
        Q = build_qlb_from_pqn(e6_conformal())
        E = qlb_double(Q)
        # covector side of this double is the deformed A-structure; vectors
        # are sections of A*_pi: their skew bracket is the Poisson bracket
        got = skew_bracket(E, E.frame_section(0), E.frame_section(1))
        from algebroid_forge.pn import poisson_bracket

        want = poisson_bracket(std_pi(TR2), TR2.coframe(0), TR2.coframe(1))
        assert retag(got.vec, TR2, FORM) == want

    def test_skewness(self):
        E = twisted_double(TR3, top_form(TR3))
        fam = SectionFamily(E, seed=3, samples=4, max_degree=1)
        for (l1, e1), (l2, e2) in fam.tuples(2)[:30]:
            assert (skew_bracket(E, e1, e2) + skew_bracket(E, e2, e1)).is_zero()


class TestCourantAxioms:
    def test_standard_tr2_passes_with_half(self):
        E = standard_double(TR2)
        report = verify_courant_axioms(E, kappa=Fraction(1, 2), samples=6)
        assert report.passed

    def test_standard_tr2_kappa_one_fails_c2(self):
        E = standard_double(TR2)
        report = verify_courant_axioms(E, kappa=Fraction(1), samples=6)
        assert not report.passed
        assert [c.name for c in report.failing_clauses()] == ["C2-squares"]

    def test_twisted_nonclosed_fails_c1(self):
        phi = TR4.section(FORM, 3, {(0, 1, 2): TR4.coord_rf("x4")})
        E = twisted_double(TR4, phi)
        report = verify_courant_axioms(E, samples=2, max_degree=1)
        assert not report.passed
        assert "C1-leibniz-jacobi" in [c.name for c in report.failing_clauses()]

    def test_twisted_closed_passes(self):
        E = twisted_double(TR3, top_form(TR3))
        report = verify_courant_axioms(E, samples=4, max_degree=1)
        assert report.passed

    def test_qlb_double_rank4_rational(self):
        pi, phi = tr4_twisted()
        Q = qlb_from_twisted_poisson(TR4, pi, phi)
        E = qlb_double(Q)
        report = verify_courant_axioms(E, samples=2, max_degree=1)
        assert report.passed

    def test_so3_standard_double(self):
        from test_calculus import so3

        E = standard_double(so3())
        report = verify_courant_axioms(E, samples=4)
        assert report.passed

    def test_conjugate_passes(self):
        E = conjugate(standard_double(TR2))
        report = verify_courant_axioms(E, samples=4)
        assert report.passed


class TestConjugateProduct:
    def test_conjugate_negates_pairing(self):
        E = standard_double(TR2)
        Ec = conjugate(E)
        for i in range(2):
            for j in range(2):
                lhs = pairing_sections(Ec, Ec.frame_section(i), Ec.coframe_section(j))
                rhs = pairing_sections(E, E.frame_section(i), E.coframe_section(j))
                assert lhs == -rhs

    def test_conjugate_involution(self):
        E = twisted_double(TR3, top_form(TR3))
        assert conjugate(conjugate(E)) == E

    def test_product_of_standards_is_standard_of_product(self):
        E1 = standard_double(TR2)
        E2 = standard_double(tangent_algebroid(2, prefix="y"))
        got = product(E1, E2)
        combined = got.base
        want = standard_double(combined)
        assert got.dual == want.dual
        assert got.x3 == want.x3 and got.psi == want.psi
        assert not got.conjugated

    def test_product_renames_colliding_coordinates(self):
        E1 = standard_double(TR2)
        E2 = standard_double(TR2)
        got, renames = product_with_renaming(E1, conjugate(E2))
        assert got.base.coords == ("x1", "x2", "x1_b", "x2_b")
        assert renames == {"x1": "x1_b", "x2": "x2_b"}
        assert not got.conjugated

    def test_product_with_conjugate_is_courant(self):
        # the mixed product must itself satisfy the axioms: this pins the
        # transported-conjugation construction
        E1 = standard_double(TR2)
        E2 = standard_double(tangent_algebroid(2, prefix="y"))
        E = product(E1, conjugate(E2))
        report = verify_courant_axioms(E, samples=2, max_degree=1)
        assert report.passed


class TestGeneralizedDirac:
    def test_tangent_conormal_passes_when_phi_pulls_back_to_zero(self):
        phi = TR4.section(FORM, 3, {(0, 1, 2): TR4.one_rf()})
        E = twisted_double(TR4, phi)
        F = tangent_conormal_dirac(E, ["x3"])
        report = check_generalized_dirac(F)
        assert report.passed

    def test_tangent_conormal_fails_when_phi_survives(self):
        phi = TR4.section(FORM, 3, {(0, 1, 2): TR4.one_rf()})
        E = twisted_double(TR4, phi)
        F = tangent_conormal_dirac(E, ["x4"])
        report = check_generalized_dirac(F)
        assert not report.passed
        assert "D3-bracket-closure" in [c.name for c in report.failing_clauses()]

    def test_poisson_graph_is_dirac(self):
        # graph of pi = d1^d2: spanned by (e_i + pi#(eps_i)) wait: by
        # (pi#(eps_i) + eps_i); supported on all of M
        E = standard_double(TR2)
        P = Submanifold.coordinate_subspace(TR2.coords, ())
        from algebroid_forge.pn import pi_sharp

        pi = std_pi(TR2)
        gens = []
        for i in range(2):
            gens.append(
                (
                    f"g{i+1}",
                    CourantSection(pi_sharp(pi, TR2.coframe(i)), TR2.coframe(i)),
                )
            )
        report = check_generalized_dirac(GeneralizedDirac(E, P, gens))
        assert report.passed

    def test_nonisotropic_fails_d1(self):
        E = standard_double(TR2)
        P = Submanifold.coordinate_subspace(TR2.coords, ())
        gens = [
            ("g1", E.frame_section(0) + E.coframe_section(0)),
            ("g2", E.frame_section(1)),
        ]
        report = check_generalized_dirac(GeneralizedDirac(E, P, gens))
        assert not report.passed
        assert "D1-maximal-isotropy" in [c.name for c in report.failing_clauses()]


class TestSplitDirac:
    def instances(self):
        # The underlying algebroid of a closed-3-form QLB is the null dual,
        # so its frame corresponds to the coframe dx_i of the original chart:
        # F = L + Lperp below realizes TP + nu*P style subbundles.
        out = []
        # (a) L = span{dx3} over P = {x3=0}: Lperp = span{d1, d2}, which is
        # tangent to P and misses the phi slot: everything passes
        Q1 = qlb_from_closed3form(TR3, top_form(TR3))
        L1 = SplitSubbundle([[Fraction(0), Fraction(0), Fraction(1)]])
        P1 = Submanifold.coordinate_subspace(TR3.coords, ("x3",))
        out.append(("conormal-x3", Q1, L1, P1, True))
        # (b) X = 0 Lie bialgebroid case (conformal triangular structure)
        Q2 = build_qlb_from_pqn(e6_conformal())
        L2 = SplitSubbundle([[Fraction(1), Fraction(0)]])
        P2 = Submanifold.coordinate_subspace(TR2.coords, ())
        out.append(("bialgebroid-P=M", Q2, L2, P2, True))
        # (c) L = span{dx1} over {x3=0}: Lperp contains d3, transverse to P
        L3 = SplitSubbundle([[Fraction(1), Fraction(0), Fraction(0)]])
        out.append(("anchor-violated", Q1, L3, P1, False))
        # (d) P = M on TR4 with phi hitting all three Lperp directions
        phi4 = TR4.section(FORM, 3, {(1, 2, 3): TR4.one_rf()})
        Q4 = qlb_from_closed3form(TR4, phi4)
        L4 = SplitSubbundle([[Fraction(1), Fraction(0), Fraction(0), Fraction(0)]])
        P4 = Submanifold.coordinate_subspace(TR4.coords, ())
        out.append(("X-on-Lperp", Q4, L4, P4, False))
        # (e) same split with phi moved off the Lperp directions: passes
        phi5 = TR4.section(FORM, 3, {(0, 1, 2): TR4.one_rf()})
        Q5 = qlb_from_closed3form(TR4, phi5)
        out.append(("X-off-Lperp", Q5, L4, P4, True))
        # (f) nonabelian side: so3 closed 3-form, L = span{eps3} over a point
        from test_calculus import so3

        A3 = so3()
        chi = A3.section(FORM, 3, {(0, 1, 2): A3.one_rf()})
        Q6 = qlb_from_closed3form(A3, chi)
        P6 = Submanifold.coordinate_subspace(A3.coords, ())
        out.append(("so3-conormal", Q6, L1, P6, False))
        return out

    def test_biconditional_on_all_instances(self):
        for name, Q, L, P, expected in self.instances():
            report = check_split_dirac(Q, L, P)
            bic = [c for c in report.clauses if c.name == "biconditional"][0]
            assert bic.passed, f"{name}: biconditional violated"
            four = all(
                c.passed
                for c in report.clauses
                if c.name.startswith(("1-", "2-", "3-", "4-"))
            )
            assert four == expected, f"{name}: expected {expected}, got {four}"


class TestMorphismGraph:
    def test_identity_graph(self):
        Q = qlb_from_closed3form(TR3, top_form(TR3))
        F = build_morphism_graph(identity_morphism(Q.base), Q, Q)
        report = check_generalized_dirac(F)
        assert report.passed

    def _e3_morphism(self, corrupt=False):
        AN = an_presentation()
        n = diag(AN, ["x1", "x2", "x3"])
        psi = AN.section(FORM, 3, {(0, 1, 2): AN.one_rf()})
        source = qlb_from_closed3form(AN, psi)
        base = null_presentation(AN)
        target_x = psi if corrupt else nstar_pullback(AN, n, psi, "multiplicative")
        target = QuasiLieBialgebroid(
            base, deformed_presentation(AN, n), retag(target_x, base, MULTIVECTOR)
        )
        matrix = tuple(tuple(n[i][j] for i in range(3)) for j in range(3))
        phi = BundleMorphism(
            source.base, target.base, tuple(AN.coord_rf(c) for c in AN.coords), matrix
        )
        return phi, source, target

    def test_e3_nstar_graph_passes(self):
        phi, source, target = self._e3_morphism()
        F = build_morphism_graph(phi, source, target)
        report = check_generalized_dirac(F)
        assert report.passed

    def test_corrupted_target_fails_d3(self):
        phi, source, target = self._e3_morphism(corrupt=True)
        F = build_morphism_graph(phi, source, target)
        report = check_generalized_dirac(F)
        assert not report.passed
        assert "D3-bracket-closure" in [c.name for c in report.failing_clauses()]
