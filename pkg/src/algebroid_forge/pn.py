"""Bivectors, endomorphisms and twists: sharp maps, deformed brackets,
Nijenhuis torsion, twisted Poisson structures, quasi-Lie bialgebroids,
Poisson quasi-Nijenhuis structures and their morphisms.

Derived presentations do the heavy lifting: the dual algebroid A*_{pi,phi}
(coframe as frame, anchor rho o pi#), the N-deformed structure (A, [.,.]_N,
rho o N) and the prime structure (A, [.,.]', rho) are ordinary
presentations, so the generic differential and Schouten machinery applies to
both sides of every duality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .calculus import (
    FORM,
    MULTIVECTOR,
    AlgebroidPresentation,
    BundleMorphism,
    GradedSection,
    check_axioms,
    d_function,
    differential,
    evaluate,
    insert,
    is_lie_algebroid_morphism,
    lie_derivative,
    mat_apply,
    null_presentation,
    pairing,
    pullback,
    retag,
    schouten,
    vector_field,
    wedge,
)
from .errors import DegreeMismatch, HypothesisNotSatisfied, VarianceMismatch
from .rational import RationalFunction
from .reporting import (
    EVIDENCE_SAMPLED,
    HYPOTHESIS,
    PROOF_GENERATORS,
    PROOF_TENSORIAL,
    Report,
)

Matrix = tuple[tuple[RationalFunction, ...], ...]


# ---------------------------------------------------------------------------
# sharp maps and matrices
# ---------------------------------------------------------------------------


def pi_sharp_matrix(pi: GradedSection) -> Matrix:
    """Matrix of pi#: A* -> A; column i lists the frame components of pi#(eps^i)."""
    A = pi.parent
    rows = [[A.zero_rf() for _ in range(A.rank)] for _ in range(A.rank)]
    for i in range(A.rank):
        image = insert(pi, A.coframe(i))
        for (k,), c in image.coeffs.items():
            rows[k][i] = c
    return tuple(tuple(r) for r in rows)


def nstar_matrix(A: AlgebroidPresentation, n_matrix: Matrix) -> Matrix:
    """Matrix of N* on the coframe: N*(eps^i) = sum_j N[i][j] eps^j."""
    return tuple(tuple(n_matrix[i][j] for i in range(A.rank)) for j in range(A.rank))


def matrix_compose(A: AlgebroidPresentation, left: Matrix, right: Matrix) -> Matrix:
    rank = A.rank
    out = []
    for k in range(rank):
        row = []
        for i in range(rank):
            acc = A.zero_rf()
            for m in range(rank):
                if not left[k][m].is_zero() and not right[m][i].is_zero():
                    acc = acc + left[k][m] * right[m][i]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def pi_sharp(pi: GradedSection, mu: GradedSection) -> GradedSection:
    """Extension of pi# to k-forms: <pi# mu, a_1 ^...^ a_k> = (-1)^k mu(pi# a_1, ...)."""
    if pi.variance != MULTIVECTOR or pi.degree != 2:
        raise DegreeMismatch("pi must be a degree-2 multivector")
    if mu.variance != FORM:
        raise VarianceMismatch("pi_sharp acts on forms")
    A = pi.parent
    k = mu.degree
    if k == 0:
        return retag(mu, A, MULTIVECTOR)
    images = [insert(pi, A.coframe(i)) for i in range(A.rank)]
    sign = -1 if k % 2 else 1
    coeffs = {}
    for idx in combinations(range(A.rank), k):
        w = images[idx[0]]
        for t in idx[1:]:
            w = wedge(w, images[t])
        value = pairing(mu, w)
        if not value.is_zero():
            coeffs[idx] = value if sign == 1 else -value
    return A.section(MULTIVECTOR, k, coeffs)


def bivector_from_sharp(A: AlgebroidPresentation, sharp: Matrix) -> GradedSection:
    """Reconstruct the bivector with a given sharp matrix; requires antisymmetry."""
    coeffs = {}
    for j in range(A.rank):
        for k in range(j + 1, A.rank):
            coeffs[(j, k)] = sharp[k][j]
    return A.section(MULTIVECTOR, 2, coeffs)


def sharp_is_antisymmetric(A: AlgebroidPresentation, sharp: Matrix) -> bool:
    for j in range(A.rank):
        for k in range(A.rank):
            if not (sharp[k][j] + sharp[j][k]).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# deformed brackets and torsion
# ---------------------------------------------------------------------------


def deformed_bracket(
    A: AlgebroidPresentation, n_matrix: Matrix, X: GradedSection, Y: GradedSection
) -> GradedSection:
    """[X, Y]_N = [NX, Y] + [X, NY] - N[X, Y]."""
    nx, ny = mat_apply(n_matrix, X), mat_apply(n_matrix, Y)
    return schouten(nx, Y) + schouten(X, ny) - mat_apply(n_matrix, schouten(X, Y))


def nijenhuis_torsion(
    A: AlgebroidPresentation, n_matrix: Matrix, X: GradedSection, Y: GradedSection
) -> GradedSection:
    """T_N(X, Y) = [NX, NY] - N [X, Y]_N."""
    nx, ny = mat_apply(n_matrix, X), mat_apply(n_matrix, Y)
    return schouten(nx, ny) - mat_apply(n_matrix, deformed_bracket(A, n_matrix, X, Y))


def deformed_presentation(
    A: AlgebroidPresentation, n_matrix: Matrix, name: str = ""
) -> AlgebroidPresentation:
    """A_N = (A, [.,.]_N, rho o N) as presentation data (axioms not implied)."""
    anchor = []
    for i in range(A.rank):
        row = [A.zero_rf() for _ in range(A.n)]
        for k in range(A.rank):
            c = n_matrix[k][i]
            if not c.is_zero():
                for a in range(A.n):
                    if not A.anchor[k][a].is_zero():
                        row[a] = row[a] + c * A.anchor[k][a]
        anchor.append(tuple(row))
    rows = []
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            br = deformed_bracket(A, n_matrix, A.frame(i), A.frame(j))
            rows.append(tuple(br.coefficient((k,)) for k in range(A.rank)))
    return AlgebroidPresentation(
        A.coords, A.rank, tuple(anchor), tuple(rows), name=name or f"{A.name}_N"
    )


# ---------------------------------------------------------------------------
# i_N, d_N, N* pullbacks
# ---------------------------------------------------------------------------


def insert_endomorphism(A: AlgebroidPresentation, n_matrix: Matrix, mu: GradedSection) -> GradedSection:
    """i_N mu, the degree-0 derivation (i_N mu)(X_1..X_k) = sum_j mu(.., N X_j, ..)."""
    if mu.variance != FORM:
        raise VarianceMismatch("i_N acts on forms")
    nstar = nstar_matrix(A, n_matrix)
    out = A.zero_section(FORM, mu.degree)
    for idx, f in mu.coeffs.items():
        for t in range(len(idx)):
            prefix = A.section(FORM, t, {idx[:t]: f})
            slot = mat_apply(nstar, retag(A.coframe(idx[t]), A, MULTIVECTOR))
            piece = wedge(prefix, retag(slot, A, FORM))
            suffix = A.section(FORM, len(idx) - t - 1, {idx[t + 1 :]: A.one_rf()})
            out = out + wedge(piece, suffix)
    return out


def nstar_pullback(
    A: AlgebroidPresentation, n_matrix: Matrix, psi: GradedSection, mode: str = "multiplicative"
) -> GradedSection:
    """N* on forms: all slots through N (multiplicative) or the i_N derivation."""
    if mode == "derivation":
        return insert_endomorphism(A, n_matrix, psi)
    if mode != "multiplicative":
        raise ValueError("mode must be multiplicative or derivation")
    nstar = nstar_matrix(A, n_matrix)
    out = A.zero_section(FORM, psi.degree)
    for idx, f in psi.coeffs.items():
        term = A.function(f, FORM)
        for t in idx:
            slot = mat_apply(nstar, retag(A.coframe(t), A, MULTIVECTOR))
            term = wedge(term, retag(slot, A, FORM))
        out = out + term
    return out


def d_n(A: AlgebroidPresentation, n_matrix: Matrix, mu: GradedSection) -> GradedSection:
    """d_N = i_N o d - d o i_N (equals the Cartan differential of (A,[.,.]_N, rho N))."""
    return insert_endomorphism(A, n_matrix, differential(mu)) - differential(
        insert_endomorphism(A, n_matrix, mu)
    )


# ---------------------------------------------------------------------------
# Poisson / twisted Poisson brackets and duals
# ---------------------------------------------------------------------------


def bivector_pairing(pi: GradedSection, alpha: GradedSection, beta: GradedSection) -> RationalFunction:
    """pi(alpha, beta) = <alpha ^ beta, pi>."""
    return pairing(wedge(alpha, beta), pi)


def twisted_bracket(
    pi: GradedSection, phi: GradedSection, alpha: GradedSection, beta: GradedSection
) -> GradedSection:
    """[a, b]^phi_pi = L_{pi#a} b - L_{pi#b} a - d(pi(a,b)) + phi(pi#a, pi#b, -)."""
    A = pi.parent
    sa, sb = pi_sharp(pi, alpha), pi_sharp(pi, beta)
    out = lie_derivative(sa, beta) - lie_derivative(sb, alpha)
    out = out - d_function(A, bivector_pairing(pi, alpha, beta))
    if phi is not None and not phi.is_zero():
        out = out + insert(phi, wedge(sa, sb))
    return out


def poisson_bracket(pi: GradedSection, alpha: GradedSection, beta: GradedSection) -> GradedSection:
    """The phi = 0 specialization of the twisted bracket."""
    return twisted_bracket(pi, None, alpha, beta)


def twisted_differential(pi: GradedSection, phi: GradedSection, X: GradedSection) -> GradedSection:
    """d^phi_pi X = [pi, X] - pi#(i_X phi) on functions and degree-1 sections."""
    if X.degree > 1:
        raise DegreeMismatch("the displayed formula covers degrees 0 and 1")
    out = schouten(pi, X)
    if X.degree == 1 and phi is not None and not phi.is_zero():
        out = out - pi_sharp(pi, insert(phi, X))
    return out


def dual_presentation(
    A: AlgebroidPresentation,
    pi: GradedSection,
    phi: GradedSection | None = None,
    name: str = "",
) -> AlgebroidPresentation:
    """A*_{pi,phi}: coframe as frame, bracket [.,.]^phi_pi, anchor rho o pi#."""
    sharp = pi_sharp_matrix(pi)
    anchor = []
    for i in range(A.rank):
        row = [A.zero_rf() for _ in range(A.n)]
        for k in range(A.rank):
            c = sharp[k][i]
            if not c.is_zero():
                for a in range(A.n):
                    if not A.anchor[k][a].is_zero():
                        row[a] = row[a] + c * A.anchor[k][a]
        anchor.append(tuple(row))
    rows = []
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            br = twisted_bracket(pi, phi, A.coframe(i), A.coframe(j))
            rows.append(tuple(br.coefficient((k,)) for k in range(A.rank)))
    return AlgebroidPresentation(
        A.coords, A.rank, tuple(anchor), tuple(rows), name=name or f"{A.name}*_pi"
    )


def prime_presentation(
    A: AlgebroidPresentation, pi: GradedSection, phi: GradedSection, name: str = ""
) -> AlgebroidPresentation:
    """(A, [.,.]', rho) with [X,Y]' = [X,Y] - pi#(phi(X,Y,-)); its differential is d'."""
    rows = []
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            br = schouten(A.frame(i), A.frame(j))
            if phi is not None and not phi.is_zero():
                gamma = insert(phi, wedge(A.frame(i), A.frame(j)))
                br = br - pi_sharp(pi, gamma)
            rows.append(tuple(br.coefficient((k,)) for k in range(A.rank)))
    return AlgebroidPresentation(
        A.coords, A.rank, A.anchor, tuple(rows), name=name or f"{A.name}'"
    )


def dprime(
    A: AlgebroidPresentation, pi: GradedSection, phi: GradedSection, mu: GradedSection
) -> GradedSection:
    """d' on forms of A (the Cartan differential of the prime structure)."""
    prime = prime_presentation(A, pi, phi)
    return retag(differential(retag(mu, prime, FORM)), A, FORM)


# ---------------------------------------------------------------------------
# compatibility checks
# ---------------------------------------------------------------------------


def magri_morosi(
    A: AlgebroidPresentation,
    pi: GradedSection,
    n_matrix: Matrix,
    alpha: GradedSection,
    beta: GradedSection,
) -> GradedSection:
    """C(pi, N)(a, b) = [a, b]_{N pi} - [a, b]^{N*}_pi; requires N pi antisymmetric."""
    sharp = pi_sharp_matrix(pi)
    nsharp = matrix_compose(A, n_matrix, sharp)
    if not sharp_is_antisymmetric(A, nsharp):
        raise HypothesisNotSatisfied("N pi is not a bivector (N o pi# not antisymmetric)")
    npi = bivector_from_sharp(A, nsharp)
    first = poisson_bracket(npi, alpha, beta)
    dual = dual_presentation(A, pi)
    nstar = nstar_matrix(A, n_matrix)
    second = deformed_bracket(
        dual,
        tuple(tuple(row) for row in nstar),
        retag(alpha, dual, MULTIVECTOR),
        retag(beta, dual, MULTIVECTOR),
    )
    return first - retag(second, A, FORM)


def check_compatible(
    A: AlgebroidPresentation, pi: GradedSection, n_matrix: Matrix, task: str = "check-compatible"
) -> Report:
    """N pi# = pi# N* and vanishing Magri-Morosi concomitant, on frames."""
    report = Report(task)
    sharp = pi_sharp_matrix(pi)
    nsharp = matrix_compose(A, n_matrix, sharp)
    anti = report.clause("np-bivector", PROOF_TENSORIAL, note="precondition: N pi antisymmetric")
    for j in range(A.rank):
        for k in range(j, A.rank):
            anti.record(f"(Npi)[{j+1},{k+1}]+(Npi)[{k+1},{j+1}]", nsharp[k][j] + nsharp[j][k])
    intertwine = report.clause("sharp-intertwines", PROOF_TENSORIAL)
    other = matrix_compose(A, sharp, nstar_matrix(A, n_matrix))
    for k in range(A.rank):
        for i in range(A.rank):
            intertwine.record(f"(Npi# - pi#N*)[{k+1},{i+1}]", nsharp[k][i] - other[k][i])
    concomitant = report.clause("magri-morosi", PROOF_TENSORIAL)
    if anti.passed:
        for i in range(A.rank):
            for j in range(i + 1, A.rank):
                c = magri_morosi(A, pi, n_matrix, A.coframe(i), A.coframe(j))
                concomitant.record(f"C(eps{i+1},eps{j+1})", c)
    else:
        concomitant.record_flag("precondition", False, "Npi-not-a-bivector")
    return report


def check_twisted_poisson(
    A: AlgebroidPresentation,
    pi: GradedSection,
    phi: GradedSection,
    task: str = "check-twisted-poisson",
) -> Report:
    """d phi = 0 and [pi, pi] = 2 pi#(phi), exactly."""
    report = Report(task)
    closed = report.clause("closed-3form", PROOF_TENSORIAL)
    closed.record("dphi", differential(phi))
    identity = report.clause("twisted-poisson-identity", PROOF_TENSORIAL)
    residue = schouten(pi, pi) - pi_sharp(pi, phi).scale(2)
    identity.record("[pi,pi]-2pi#(phi)", residue)
    return report


@dataclass(frozen=True)
class PqnStructure:
    A: AlgebroidPresentation
    pi: GradedSection
    n_matrix: Matrix
    phi: GradedSection


def check_pqn(
    A: AlgebroidPresentation,
    pi: GradedSection,
    n_matrix: Matrix,
    phi: GradedSection,
    task: str = "check-pqn",
) -> Report:
    """All Poisson quasi-Nijenhuis clauses, each an exact residue."""
    report = Report(task)
    poisson = report.clause("pi-poisson", PROOF_TENSORIAL)
    poisson.record("[pi,pi]", schouten(pi, pi))
    compat = check_compatible(A, pi, n_matrix)
    report.clauses.extend(compat.clauses)
    closed = report.clause("closed-3form", PROOF_TENSORIAL)
    closed.record("dphi", differential(phi))
    closed_in = report.clause("closed-iNphi", PROOF_TENSORIAL)
    closed_in.record("d(iNphi)", differential(insert_endomorphism(A, n_matrix, phi)))
    torsion = report.clause("torsion-matches-phi", PROOF_TENSORIAL)
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            t = nijenhuis_torsion(A, n_matrix, A.frame(i), A.frame(j))
            corr = pi_sharp(pi, insert(phi, wedge(A.frame(i), A.frame(j))))
            torsion.record(f"T_N(e{i+1},e{j+1})+pi#(i phi)", t + corr)
    return report


# ---------------------------------------------------------------------------
# quasi-Lie bialgebroids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuasiLieBialgebroid:
    """(base, d_*, X): base carries the Lie algebroid; ``dual`` is the anchored
    bracket data on base^* whose Cartan formula defines d_* on multivectors of
    base; ``x3`` is the degree-3 multivector."""

    base: AlgebroidPresentation
    dual: AlgebroidPresentation
    x3: GradedSection
    name: str = field(default="", compare=False)

    def d_star(self, s) -> GradedSection:
        if isinstance(s, RationalFunction):
            return retag(d_function(self.dual, s), self.base, MULTIVECTOR)
        if s.variance != MULTIVECTOR:
            raise VarianceMismatch("d_star acts on multivectors of the base algebroid")
        return retag(differential(retag(s, self.dual, FORM)), self.base, MULTIVECTOR)


def qlb_from_closed3form(A: AlgebroidPresentation, phi: GradedSection, name: str = "") -> QuasiLieBialgebroid:
    """(A*, d_A, phi) with the null structure on A*; requires d phi = 0."""
    dphi = differential(phi)
    if not dphi.is_zero():
        raise HypothesisNotSatisfied(
            "phi is not closed", Report("qlb-from-3form", verdict_override=HYPOTHESIS, detail=str(dphi))
        )
    base = null_presentation(A, name=f"{A.name}*null")
    return QuasiLieBialgebroid(base, A, retag(phi, base, MULTIVECTOR), name=name)


def qlb_from_twisted_poisson(
    A: AlgebroidPresentation, pi: GradedSection, phi: GradedSection, name: str = ""
) -> QuasiLieBialgebroid:
    """(A*_{pi,phi}, d', phi); requires the twisted Poisson identity."""
    pre = check_twisted_poisson(A, pi, phi)
    if not pre.passed:
        raise HypothesisNotSatisfied("not a twisted Poisson structure", pre)
    base = dual_presentation(A, pi, phi)
    return QuasiLieBialgebroid(
        base, prime_presentation(A, pi, phi), retag(phi, base, MULTIVECTOR), name=name
    )


def build_qlb_from_pqn(S: PqnStructure, name: str = "") -> QuasiLieBialgebroid:
    """The section-2 theorem: (A*_pi, d_N, phi) from a PqN structure."""
    pre = check_pqn(S.A, S.pi, S.n_matrix, S.phi)
    if not pre.passed:
        failing = ", ".join(c.name for c in pre.failing_clauses())
        raise HypothesisNotSatisfied(f"not a PqN structure (failing: {failing})", pre)
    base = dual_presentation(S.A, S.pi)
    dual = deformed_presentation(S.A, S.n_matrix)
    return QuasiLieBialgebroid(base, dual, retag(S.phi, base, MULTIVECTOR), name=name)


def _random_one_multivector(A: AlgebroidPresentation, rng: random.Random, max_degree: int) -> GradedSection:
    coeffs = {}
    for i in range(A.rank):
        poly = A.scalar(rng.randrange(-2, 3))
        for name in A.coords:
            d = rng.randrange(0, max_degree + 1)
            if d and rng.random() < 0.5:
                poly = poly + A.coord_rf(name) ** d * rng.randrange(-2, 3)
        coeffs[(i,)] = poly
    return A.section(MULTIVECTOR, 1, coeffs)


def check_qlb(
    Q: QuasiLieBialgebroid,
    task: str = "check-qlb",
    seed: int = 0,
    samples: int = 10,
    max_degree: int = 2,
) -> Report:
    """d_* X = 0, d_*^2 = [X, -] on generators, and the bracket-derivation property."""
    report = Report(task, params={"seed": seed, "samples": samples, "max_degree": max_degree})
    axioms = check_axioms(Q.base)
    base_clause = report.clause("base-axioms", PROOF_TENSORIAL)
    for c in axioms.clauses:
        base_clause.checked += c.checked
        base_clause.failures.extend(c.failures)
    closes = report.clause("dstar-closes-X", PROOF_TENSORIAL, note="coefficient identity")
    closes.record("dstar(X)", Q.d_star(Q.x3))
    squared = report.clause(
        "dstar-squared-is-bracket-with-X",
        PROOF_GENERATORS,
        note="complete: both sides are degree-2 derivations",
    )
    for name in Q.base.coords:
        f = Q.base.coord_rf(name)
        residue = Q.d_star(Q.d_star(f)) - schouten(Q.x3, Q.base.function(f))
        squared.record(f"generator {name}", residue)
    for i in range(Q.base.rank):
        u = Q.base.frame(i)
        residue = Q.d_star(Q.d_star(u)) - schouten(Q.x3, u)
        squared.record(f"generator e{i+1}", residue)
    derivation = report.clause("dstar-derives-bracket", EVIDENCE_SAMPLED)

    def derivation_residue(u: GradedSection, v: GradedSection) -> GradedSection:
        # d_*[u, v] = [d_*u, v] + (-1)^{p-1} [u, d_*v], p = deg u
        sign = -1 if (u.degree - 1) % 2 else 1
        return (
            Q.d_star(schouten(u, v))
            - schouten(Q.d_star(u), v)
            - schouten(u, Q.d_star(v)).scale(sign)
        )

    for i in range(Q.base.rank):
        for j in range(i + 1, Q.base.rank):
            derivation.record(
                f"frames e{i+1},e{j+1}", derivation_residue(Q.base.frame(i), Q.base.frame(j))
            )
        for name in Q.base.coords:
            derivation.record(
                f"e{i+1},{name}",
                derivation_residue(Q.base.frame(i), Q.base.function(Q.base.coord_rf(name))),
            )
    rng = random.Random(seed)
    for s in range(samples):
        u = _random_one_multivector(Q.base, rng, max_degree)
        v = _random_one_multivector(Q.base, rng, max_degree)
        derivation.record(f"sample {s}", derivation_residue(u, v))
    return report


def verify_lemma_tnstar(S: PqnStructure, task: str = "verify-lemma-tnstar") -> Report:
    """<T_{N*}(a, b), X> = phi(pi# a, pi# b, X) on all frame triples."""
    pre = check_pqn(S.A, S.pi, S.n_matrix, S.phi)
    if not pre.passed:
        failing = ", ".join(c.name for c in pre.failing_clauses())
        raise HypothesisNotSatisfied(f"not a PqN structure (failing: {failing})", pre)
    A = S.A
    dual = dual_presentation(A, S.pi)
    nstar = nstar_matrix(A, S.n_matrix)
    report = Report(task)
    clause = report.clause("tnstar-identity", PROOF_TENSORIAL)
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            torsion = nijenhuis_torsion(
                dual,
                nstar,
                retag(A.coframe(i), dual, MULTIVECTOR),
                retag(A.coframe(j), dual, MULTIVECTOR),
            )
            torsion_form = retag(torsion, A, FORM)
            si = pi_sharp(S.pi, A.coframe(i))
            sj = pi_sharp(S.pi, A.coframe(j))
            for k in range(A.rank):
                lhs = pairing(torsion_form, A.frame(k))
                rhs = evaluate(S.phi, [si, sj, A.frame(k)])
                clause.record(f"(eps{i+1},eps{j+1},e{k+1})", lhs - rhs)
    return report


# ---------------------------------------------------------------------------
# quasi-Lie bialgebroid morphisms
# ---------------------------------------------------------------------------


def _push_multivector(phi: BundleMorphism, P: GradedSection):
    """Coefficients of (wedge^k Phi)(P) on the target frame, over the source chart."""
    k = P.degree
    out: dict[tuple[int, ...], RationalFunction] = {}
    for jdx in combinations(range(phi.target.rank), k):
        acc = RationalFunction.zero(phi.source.coords)
        for idx, f in P.coeffs.items():
            # minor determinant of the morphism matrix, rows jdx, columns idx
            det = _det([[phi.matrix[j][i] for i in idx] for j in jdx], phi.source.coords)
            acc = acc + f * det
        out[jdx] = acc
    return out


def _det(rows, coords) -> RationalFunction:
    n = len(rows)
    if n == 0:
        return RationalFunction.one(coords)
    if n == 1:
        return rows[0][0]
    out = RationalFunction.zero(coords)
    for c in range(n):
        minor = [r[:c] + r[c + 1 :] for r in rows[1:]]
        term = rows[0][c] * _det(minor, coords)
        out = out + term if c % 2 == 0 else out - term
    return out


def check_qlb_morphism(
    phi: BundleMorphism,
    QA: QuasiLieBialgebroid,
    QB: QuasiLieBialgebroid,
    task: str = "check-qlb-morphism",
) -> Report:
    """The four clauses of a quasi-Lie bialgebroid morphism, exactly."""
    from .errors import MalformedMorphism

    if phi.source != QA.base or phi.target != QB.base:
        raise MalformedMorphism("morphism must map between the underlying algebroids")
    report = Report(task)
    chain = is_lie_algebroid_morphism(phi)
    algebroid_clause = report.clause("lie-algebroid-morphism", PROOF_GENERATORS)
    for c in chain.clauses:
        algebroid_clause.checked += c.checked
        algebroid_clause.failures.extend(c.failures)

    brackets = report.clause("dual-brackets-compatible", PROOF_TENSORIAL)
    for i in range(QB.base.rank):
        for j in range(i + 1, QB.base.rank):
            a, b = QB.base.coframe(i), QB.base.coframe(j)
            pa, pb = pullback(phi, a), pullback(phi, b)
            lhs = retag(
                schouten(retag(pa, QA.dual, MULTIVECTOR), retag(pb, QA.dual, MULTIVECTOR)),
                QA.base,
                FORM,
            )
            rhs_target = retag(
                schouten(retag(a, QB.dual, MULTIVECTOR), retag(b, QB.dual, MULTIVECTOR)),
                QB.base,
                FORM,
            )
            brackets.record(f"eps{i+1},eps{j+1}", lhs - pullback(phi, rhs_target))

    anchors = report.clause("dual-anchors-related", PROOF_TENSORIAL)
    for j in range(QB.base.rank):
        pulled = pullback(phi, QB.base.coframe(j))
        v = vector_field(retag(pulled, QA.dual, MULTIVECTOR))
        w = vector_field(retag(QB.base.coframe(j), QB.dual, MULTIVECTOR))
        for b, name in enumerate(phi.target.coords):
            push = RationalFunction.zero(phi.source.coords)
            for a, src in enumerate(phi.source.coords):
                if not v[a].is_zero():
                    push = push + v[a] * phi.base_map[b].differentiate(src)
            anchors.record(f"eps{j+1}.{name}", push - phi.base_subs(w[b]))

    threesec = report.clause("three-section-pushes", PROOF_TENSORIAL)
    pushed = _push_multivector(phi, QA.x3)
    for jdx in combinations(range(QB.base.rank), 3):
        target_coeff = phi.base_subs(QB.x3.coefficient(jdx))
        label = "e" + "^e".join(str(j + 1) for j in jdx)
        threesec.record(label, pushed.get(jdx, RationalFunction.zero(phi.source.coords)) - target_coeff)
    return report
