"""Perron-Frobenius parametrization of the positive fiber over Q > 0.

Builds M_sigma (multiplication by the sum of all Schubert classes) in the
specialized algebra R_Q, extracts its unique positive eigenvector, reads off
the Schubert-class values at the distinguished point, and certifies
dominance, simplicity and uniqueness over the full spectrum.  The eigen
kernel is double precision; everything upstream of it is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from .qchev import (
    QuantumAlgebraError,
    recover_structure_constants,
    recover_structure_constants_symbolic,
)
from .weyl import coset_data, weyl_group


class PFSolveError(ArithmeticError):
    """Non-convergence, residual failure, or a dominance violation."""


class SimplicityInconclusive(PFSolveError):
    """The eigenvalue gap was too small to decide algebraic simplicity."""


def build_M_sigma(alg):
    """M_sigma = sum of all multiplication matrices; exact and nonnegative."""
    n = len(alg.basis)
    out = [[Fraction(0)] * n for _ in range(n)]
    for M in alg.mult_matrices:
        for r in range(n):
            row = M[r]
            orow = out[r]
            for c in range(n):
                orow[c] += row[c]
    for r in range(n):
        for c in range(n):
            if out[r][c] < 0:
                raise PFSolveError("negative entry in M_sigma")
        if out[r][r] < 1:
            raise PFSolveError("diagonal of M_sigma lost its identity summand")
    return [tuple(row) for row in out]


def irreducibility_check(M):
    """True iff the support digraph of the nonnegative matrix is strongly
    connected."""
    n = len(M)
    if any(M[r][c] < 0 for r in range(n) for c in range(n)):
        raise PFSolveError("irreducibility test expects a nonnegative matrix")

    def reach(adj):
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == n

    fwd = [[c for c in range(n) if M[r][c] != 0] for r in range(n)]
    bwd = [[c for c in range(n) if M[c][r] != 0] for r in range(n)]
    return reach(fwd) and reach(bwd)


@dataclass
class PFSolution:
    Q: tuple
    pf_eigenvalue: float
    sigma_values: dict
    residuals: dict
    eigenvalue_gap: float
    multiplicity_flag: bool
    mu: tuple = ()
    sign_definite_count: int = -1
    iterations: int = 0


def _sign_definite(col, rel=1e-7):
    v = np.real(col)
    if np.max(np.abs(np.imag(col))) > rel * max(np.max(np.abs(v)), 1e-300):
        return False
    scale = np.max(np.abs(v))
    if scale == 0:
        return False
    pos = np.all(v > rel * scale)
    neg = np.all(v < -rel * scale)
    return bool(pos or neg)


def pf_solve(alg, tol=1e-9, max_iter=10**5, exact_simplicity=False):
    """Positive simultaneous eigenvector of R_Q and the point it defines."""
    rs = alg.parabolic.parent
    basis = alg.basis
    n = len(basis)
    M_rat = build_M_sigma(alg)
    if n > 1 and not irreducibility_check(M_rat):
        raise PFSolveError("M_sigma is not irreducible")
    M = np.array([[float(x) for x in row] for row in M_rat])

    v = np.ones(n) / n
    lam = float(n)
    iterations = 0
    # positive diagonal makes M primitive, so plain power iteration converges
    for iterations in range(1, max_iter + 1):
        w = M @ v
        lam = float(w @ v) / float(v @ v)
        nrm = np.linalg.norm(w)
        if nrm == 0:
            raise PFSolveError("power iteration collapsed to zero")
        w = w / nrm
        if np.linalg.norm(w - v, ord=np.inf) < 1e-13:
            v = w
            break
        v = w
    else:
        raise PFSolveError(f"power iteration did not converge in {max_iter} steps")

    for _ in range(3):  # inverse-iteration polish around the Rayleigh quotient
        lam = float(v @ (M @ v)) / float(v @ v)
        shifted = M - (lam * (1 + 1e-12) + 1e-300) * np.eye(n)
        try:
            x = np.linalg.solve(shifted, v)
        except np.linalg.LinAlgError:
            break
        nx = np.linalg.norm(x)
        if not np.isfinite(nx) or nx == 0:
            break
        v = np.abs(x) / nx if np.all(x != 0) else x / nx
    lam = float(v @ (M @ v)) / float(v @ v)

    eigvals, eigvecs = np.linalg.eig(M)
    others = sorted(abs(eigvals), reverse=True)
    close = [abs(ev - lam) <= 1e-8 * max(abs(lam), 1.0) for ev in eigvals]
    if not any(close):
        raise PFSolveError("refined eigenvalue drifted away from the spectrum")
    second = 0.0
    seen_lead = False
    for a in others:
        if not seen_lead and abs(a - abs(lam)) <= 1e-8 * max(abs(lam), 1.0):
            seen_lead = True
            continue
        second = float(a)
        break
    gap = lam - second
    if n > 1 and gap <= 1e-9 * lam:
        raise PFSolveError(
            f"Perron eigenvalue not strictly dominant: lambda={lam}, next={second}"
        )
    sign_count = sum(1 for j in range(n) if _sign_definite(eigvecs[:, j]))
    mult_numeric = sum(1 for ev in eigvals if abs(ev - lam) <= 1e-8 * max(lam, 1.0))
    multiplicity_flag = mult_numeric == 1

    cd = coset_data(rs, alg.parabolic.I_P)
    pdmap = dict(cd.pd_table)
    idx = {w: k for k, w in enumerate(basis)}
    pivot = v[idx[cd.w0_P]]
    if pivot == 0:
        raise PFSolveError("eigenvector vanishes at the top class")
    mu = v / pivot
    if np.any(mu <= 0):
        raise PFSolveError("normalized eigenvector is not strictly positive")
    sigma_values = {w: float(mu[idx[pdmap[w]]]) for w in basis}

    residuals = {}
    mu_norm = float(np.linalg.norm(mu))
    for w, M_w in zip(basis, alg.mult_matrices):
        A = np.array([[float(x) for x in row] for row in M_w])
        r = float(np.linalg.norm(A @ mu - sigma_values[w] * mu))
        scale = float(np.linalg.norm(A)) * mu_norm
        residuals[w] = r / scale if scale else r
    worst = max(residuals.values())
    if worst > tol:
        raise PFSolveError(f"simultaneous-eigenvector residual {worst} exceeds {tol}")

    if abs(sigma_values[basis[0]] - 1.0) > tol:
        raise PFSolveError("normalization sigma_e(p0) = 1 failed")

    sol = PFSolution(
        Q=alg.Q,
        pf_eigenvalue=lam,
        sigma_values=sigma_values,
        residuals=residuals,
        eigenvalue_gap=float(gap),
        multiplicity_flag=multiplicity_flag,
        mu=tuple(float(x) for x in mu),
        sign_definite_count=sign_count,
        iterations=iterations,
    )
    if exact_simplicity:
        if not simplicity_certificate(alg, sol):
            raise PFSolveError("exact simplicity certificate failed")
    return sol


def simplicity_certificate(alg, sol, exact_budget=24, gap_threshold=1e-7):
    """Algebraic simplicity of the Perron eigenvalue of M_sigma.

    Uses the exact rational characteristic polynomial (Sturm counts on an
    isolating interval) when the basis is small enough, otherwise the
    numeric spectral gap; an ambiguous gap raises SimplicityInconclusive
    rather than certifying.
    """
    n = len(alg.basis)
    if n == 1:
        return True
    lam = sol.pf_eigenvalue
    if n <= exact_budget:
        M = build_M_sigma(alg)
        p = exact.charpoly(M)
        dp = exact.poly_derivative(p)
        g = exact.poly_gcd(p, dp)
        delta = Fraction(1, 10**6)
        lam_r = Fraction(lam).limit_denominator(10**12)
        for _ in range(40):
            a, b = lam_r * (1 - delta), lam_r * (1 + delta)
            if exact.poly_eval(p, a) == 0 or exact.poly_eval(p, b) == 0:
                delta = delta * Fraction(9, 10)
                continue
            roots_here = exact.count_real_roots(p, a, b)
            if roots_here == 1:
                return exact.count_real_roots(g, a, b) == 0 if len(g) > 1 else True
            if roots_here == 0:
                delta = delta * 4  # interval missed the eigenvalue; widen
            else:
                delta = delta / 4
        raise SimplicityInconclusive(
            "could not isolate the Perron eigenvalue in a rational interval"
        )
    rel_gap = sol.eigenvalue_gap / max(abs(lam), 1e-300)
    if rel_gap > gap_threshold:
        return sol.multiplicity_flag
    raise SimplicityInconclusive(
        f"relative eigenvalue gap {rel_gap} below threshold {gap_threshold}"
    )


def algebra_at(rs, Q, symbolic_budget=24):
    """Specialized algebra for P = B, via the cached symbolic table when the
    Weyl group is small enough and by direct recovery otherwise."""
    if len(weyl_group(rs)) <= symbolic_budget:
        return recover_structure_constants_symbolic(rs).specialize(Q)
    return recover_structure_constants(rs, Q, check_commute="generators")


def sample_log_uniform_q(rng, rank, low=1e-3, high=1e3, max_den=10**4):
    import math

    lo, hi = math.log10(low), math.log10(high)
    out = []
    for _ in range(rank):
        x = 10 ** rng.uniform(lo, hi)
        q = Fraction(x).limit_denominator(max_den)
        if q <= 0:
            q = Fraction(1, max_den)
        out.append(q)
    return tuple(out)


@dataclass
class SweepReport:
    type_letter: str
    rank: int
    seed: int
    tol: float
    samples: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def bijectivity_sweep(rs, sample_count=100, seed=0, tol=1e-9,
                      exact_simplicity_first=0):
    """Existence + uniqueness of the positive point over sampled Q > 0.

    Every run must produce strictly positive sigma-values, residuals within
    tol, a strictly dominant algebraically simple eigenvalue, and exactly
    one sign-definite eigenvector over the full spectrum.
    """
    rng = random.Random(seed)
    report = SweepReport(type_letter=rs.type_letter, rank=rs.rank, seed=seed, tol=tol)
    for k in range(sample_count):
        Q = sample_log_uniform_q(rng, rs.rank)
        try:
            alg = algebra_at(rs, Q)
            sol = pf_solve(alg, tol=tol)
            if sol.sign_definite_count != 1:
                raise PFSolveError(
                    f"{sol.sign_definite_count} sign-definite eigenvectors"
                )
            if not sol.multiplicity_flag:
                raise PFSolveError("eigenvalue multiplicity > 1 numerically")
            if any(s <= 0 for s in sol.sigma_values.values()):
                raise PFSolveError("non-positive sigma value")
            if k < exact_simplicity_first and not simplicity_certificate(alg, sol):
                raise PFSolveError("exact simplicity certificate failed")
            report.samples.append(
                {
                    "Q": tuple(str(q) for q in Q),
                    "lambda_pf": sol.pf_eigenvalue,
                    "gap": sol.eigenvalue_gap,
                    "max_residual": max(sol.residuals.values()),
                    "sigma": {
                        " ".join(map(str, w.word)): val
                        for w, val in sol.sigma_values.items()
                    },
                }
            )
        except (PFSolveError, QuantumAlgebraError) as err:
            report.failures.append({"Q": tuple(str(q) for q in Q), "error": str(err)})
    return report
