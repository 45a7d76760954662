"""Finite Weyl group elements as integer matrices on the root lattice.

Elements carry a reduced word plus their action matrix; identity, equality
and hashing all go through the action matrix, since words are not
canonical.  The full group is enumerated lazily (breadth-first from the
identity) and memoized per root system.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .rootsys import RootSystem, RootSystemError, parabolic, reflect_root


class WeylError(ValueError):
    """Malformed word or an element outside the expected coset set."""


@dataclass(frozen=True)
class WeylElement:
    word: tuple
    action: tuple

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.action == other.action

    def __hash__(self):
        return hash(self.action)

    @property
    def length(self):
        return len(self.word)

    def __repr__(self):
        return "w[" + " ".join(map(str, self.word)) + "]" if self.word else "w[e]"


def format_word(w):
    return " ".join(str(i) for i in w.word)


def parse_word(rs, text):
    word = tuple(int(t) for t in text.split()) if text.strip() else ()
    return element_from_word(rs, word)


def _simple_matrix(rs, i):
    n = rs.rank
    m = [[int(r == c) for c in range(n)] for r in range(n)]
    for j in range(n):
        m[i - 1][j] -= rs.cartan[i - 1][j]
    return tuple(tuple(row) for row in m)


@lru_cache(maxsize=None)
def _simple_matrices(rs):
    return {i: _simple_matrix(rs, i) for i in range(1, rs.rank + 1)}


def _mat_mul(a, b):
    return tuple(
        tuple(sum(a[r][k] * b[k][c] for k in range(len(b))) for c in range(len(b[0])))
        for r in range(len(a))
    )


def identity_element(rs):
    n = rs.rank
    return WeylElement((), tuple(tuple(int(r == c) for c in range(n)) for r in range(n)))


def apply_to_root(w, root):
    return tuple(sum(row[j] * root[j] for j in range(len(root))) for row in w.action)


def _column(action, i):
    return tuple(row[i - 1] for row in action)


def _is_negative(vec):
    return all(x <= 0 for x in vec) and any(x != 0 for x in vec)


def length_of_action(rs, action):
    """Inversion count: positive roots sent to negative ones."""
    count = 0
    for alpha in rs.positive_roots:
        img = tuple(sum(row[j] * alpha[j] for j in range(rs.rank)) for row in action)
        if _is_negative(img):
            count += 1
    return count


def word_from_action(rs, action):
    """Recover a reduced word by stripping right descents."""
    mats = _simple_matrices(rs)
    rev = []
    cur = action
    n = rs.rank
    ident = tuple(tuple(int(r == c) for c in range(n)) for r in range(n))
    while cur != ident:
        for i in range(1, n + 1):
            if _is_negative(_column(cur, i)):
                rev.append(i)
                cur = _mat_mul(cur, mats[i])
                break
        else:
            raise WeylError("matrix is not a Weyl group element")
    return tuple(reversed(rev))


def element_from_action(rs, action):
    return WeylElement(word_from_action(rs, action), action)


def element_from_word(rs, word):
    if any(not 1 <= i <= rs.rank for i in word):
        raise WeylError(f"word {word} uses indices outside 1..{rs.rank}")
    mats = _simple_matrices(rs)
    cur = identity_element(rs).action
    for i in word:
        cur = _mat_mul(cur, mats[i])
    return element_from_action(rs, cur)


def mult(rs, a, b):
    """Product in W; the stored word is re-reduced."""
    return element_from_action(rs, _mat_mul(a.action, b.action))


def inverse(rs, w):
    return element_from_word(rs, tuple(reversed(w.word)))


def simple_reflection(rs, i):
    return WeylElement((i,), _simple_matrix(rs, i))


def reflection(rs, alpha):
    """r_alpha for a positive root alpha (root coordinates)."""
    if alpha not in rs.root_index:
        raise WeylError(f"{alpha} is not a positive root")
    n = rs.rank
    cols = [reflect_root(rs, alpha, rs.simple_root(j + 1)) for j in range(n)]
    action = tuple(tuple(cols[c][r] for c in range(n)) for r in range(n))
    return element_from_action(rs, action)


@lru_cache(maxsize=None)
def longest_element(rs):
    w = identity_element(rs)
    mats = _simple_matrices(rs)
    while True:
        for i in range(1, rs.rank + 1):
            if not _is_negative(_column(w.action, i)):
                w = WeylElement(w.word + (i,), _mat_mul(w.action, mats[i]))
                break
        else:
            return element_from_action(rs, w.action)


@lru_cache(maxsize=None)
def weyl_group(rs):
    """All elements, sorted by (length, word); memoized per root system."""
    mats = _simple_matrices(rs)
    ident = identity_element(rs)
    seen = {ident.action: ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(1, rs.rank + 1):
                act = _mat_mul(w.action, mats[i])
                if act not in seen:
                    elt = WeylElement(w.word + (i,), act)
                    seen[act] = elt
                    nxt.append(elt)
        frontier = nxt
    return tuple(sorted(seen.values(), key=lambda w: (w.length, w.word)))


def is_min_rep(rs, w, I_P):
    """w in W^P iff w(alpha_i) > 0 for every i in I_P."""
    return all(not _is_negative(_column(w.action, i)) for i in I_P)


def pi_p(rs, w, I_P):
    """The W^P factor of w = pi_P(w) * (part in W_P)."""
    mats = _simple_matrices(rs)
    cur = w.action
    while True:
        for i in I_P:
            if _is_negative(_column(cur, i)):
                cur = _mat_mul(cur, mats[i])
                break
        else:
            return element_from_action(rs, cur)


def pd(rs, w, I_P=()):
    """Poincare-duality involution on W^P: min rep of w_0 w W_P."""
    if not is_min_rep(rs, w, I_P):
        raise WeylError(f"{w!r} is not a minimal coset representative for I_P={I_P}")
    return pi_p(rs, mult(rs, longest_element(rs), w), I_P)


def bruhat_covers_up(rs, w, I_P=()):
    """All (alpha, w r_alpha) with alpha in Delta_+^P, a cover, in W^P."""
    if not is_min_rep(rs, w, I_P):
        raise WeylError(f"{w!r} is not a minimal coset representative for I_P={I_P}")
    P = parabolic(rs, tuple(sorted(I_P)))
    out = []
    for alpha in P.delta_plus_P:
        t = mult(rs, w, reflection(rs, alpha))
        if t.length == w.length + 1 and is_min_rep(rs, t, I_P):
            out.append((alpha, t))
    return out


@dataclass(frozen=True)
class CosetData:
    parabolic: object
    min_reps: tuple
    w_P: WeylElement
    w0_P: WeylElement
    pd_table: tuple  # pairs (w, PD(w))

    def pd_of(self, w):
        return dict(self.pd_table)[w]


@lru_cache(maxsize=None)
def coset_data(rs, I_P=()):
    ip = tuple(sorted(set(I_P)))
    if any(not 1 <= i <= rs.rank for i in ip):
        raise RootSystemError(f"I_P {I_P} not a subset of 1..{rs.rank}")
    P = parabolic(rs, ip)
    reps = tuple(w for w in weyl_group(rs) if is_min_rep(rs, w, ip))
    w0 = longest_element(rs)
    w0p = pi_p(rs, w0, ip)
    wp = mult(rs, inverse(rs, w0p), w0)
    table = tuple((w, pd(rs, w, ip)) for w in reps)
    return CosetData(parabolic=P, min_reps=reps, w_P=wp, w0_P=w0p, pd_table=table)
