"""Affine Weyl group bookkeeping for the quantum/affine Schubert dictionary.

Only what the translation labels and the localization map need: lengths of
dominant translations, minimal-coset flags, and the monomial arithmetic of
``xi_{w t_lambda} xi_{t_mu}^{-1} -> q_{lambda-mu} sigma_w``.  General
Iwahori-Matsumoto lengths are intentionally unsupported.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import exact
from .rootsys import pair_root_coroot
from .weyl import WeylElement, format_word, is_min_rep


class AffineError(ValueError):
    pass


def is_dominant_coweight(rs, lam):
    """<alpha_i, lambda> >= 0 for every simple root alpha_i."""
    return all(
        pair_root_coroot(rs, rs.simple_root(i), lam) >= 0 for i in range(1, rs.rank + 1)
    )


def is_antidominant_coweight(rs, lam):
    return all(
        pair_root_coroot(rs, rs.simple_root(i), lam) <= 0 for i in range(1, rs.rank + 1)
    )


def translation_length(rs, lam):
    """l(t_{-lambda}) = 2 ht(lambda) for dominant lambda."""
    if not is_dominant_coweight(rs, lam):
        raise AffineError(
            f"{lam} is not dominant; general affine lengths are unsupported"
        )
    return 2 * sum(lam)


def is_min_coset(rs, w, lam):
    """Whether w t_lambda is the minimal representative of its W_af/W coset.

    Requires lambda anti-dominant, and w minimal with respect to the
    stabilizer parabolic {i : <alpha_i, lambda> = 0}; this is the finite
    criterion forced by the bijection X_*(T) <-> W_af/W <-> W_af^-.
    """
    if not is_antidominant_coweight(rs, lam):
        return False
    stab = tuple(
        i
        for i in range(1, rs.rank + 1)
        if pair_root_coroot(rs, rs.simple_root(i), lam) == 0
    )
    return is_min_rep(rs, w, stab)


@dataclass(frozen=True)
class AffineLabel:
    """The affine element w * t_lambda, used purely as a label."""

    w: WeylElement
    lam: tuple
    min_coset: bool = False

    def to_json(self):
        return {"w": format_word(self.w), "lambda": list(self.lam)}


def affine_label(rs, w, lam, require_min_coset=False):
    lam = tuple(lam)
    flag = is_min_coset(rs, w, lam)
    if require_min_coset and not flag:
        raise AffineError(f"{w!r} t_{lam} is not in W_af^-")
    return AffineLabel(w=w, lam=lam, min_coset=flag)


@dataclass(frozen=True)
class LocalizedQuantumMonomial:
    """q_nu sigma_w with nu recorded in simple-coroot coordinates."""

    exponent: tuple
    base_class: WeylElement

    def __mul__(self, other):
        if other.base_class.word and self.base_class.word:
            raise AffineError("can only multiply when one base class is trivial")
        base = self.base_class if self.base_class.word else other.base_class
        exp = tuple(a + b for a, b in zip(self.exponent, other.exponent))
        return LocalizedQuantumMonomial(exponent=exp, base_class=base)


def peterson_dictionary(rs, w, lam, mu):
    """xi_{w t_lambda} xi_{t_mu}^{-1} |-> q_{lambda-mu} sigma_w."""
    if len(lam) != rs.rank or len(mu) != rs.rank:
        raise AffineError("coroot vectors of wrong rank")
    exp = tuple(a - b for a, b in zip(lam, mu))
    return LocalizedQuantumMonomial(exponent=exp, base_class=w)


def factorization_consistency(rs, w, nu, mu):
    """Dictionary image of xi_{w t_nu} xi_{t_mu} = xi_{w t_{nu+mu}}.

    Checks dictionary(w, nu, 0) * dictionary(e, mu, 0) == dictionary(w, nu+mu, 0)
    as localized monomials; preconditions mirror the factorization statement.
    """
    nu, mu = tuple(nu), tuple(mu)
    if not is_antidominant_coweight(rs, mu):
        raise AffineError(f"mu={mu} is not anti-dominant")
    if not is_min_coset(rs, w, nu):
        raise AffineError(f"w t_nu with w={w!r}, nu={nu} is not in W_af^-")
    zero = (0,) * rs.rank
    lhs = peterson_dictionary(rs, w, nu, zero) * peterson_dictionary(
        rs, identity_like(w), mu, zero
    )
    rhs = peterson_dictionary(rs, w, tuple(a + b for a, b in zip(nu, mu)), zero)
    return lhs == rhs


def identity_like(w):
    n = len(w.action)
    return WeylElement((), tuple(tuple(int(r == c) for c in range(n)) for r in range(n)))


def affine_positivity_certificate(rs, sigma_values, Q):
    """All sigma_w values and all quantum parameters strictly positive.

    Via the dictionary this certifies positivity of every localized affine
    Schubert class on the point.
    """
    from .weyl import weyl_group

    group = weyl_group(rs)
    missing = [w for w in group if w not in sigma_values]
    if missing:
        raise AffineError(f"sigma values missing for {len(missing)} elements")
    if len(Q) != rs.rank:
        raise AffineError("need one quantum parameter per simple root")
    return all(sigma_values[w] > 0 for w in group) and all(q > 0 for q in Q)


def fundamental_coweight_multiple(rs, i):
    """Minimal m_i > 0 with m_i omega_i^vee in the coroot lattice."""
    n = rs.rank
    ct = [[Fraction(rs.cartan[j][k]) for j in range(n)] for k in range(n)]
    e = [Fraction(int(k == i - 1)) for k in range(n)]
    coords = exact.solve_right(ct, e)
    return lcm(*[c.denominator for c in coords]) if n else 1
