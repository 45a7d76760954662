"""Root-system data for the finite types A-G.

Roots live in the simple-root integer basis and coroots in the simple-coroot
basis; every pairing goes through the Cartan matrix, so no Euclidean
realization is stored.  Simple-root indices are 1-based, matching Dynkin
diagram labels.  The internal labeling is Bourbaki; ``reverse_labels=True``
gives the reversed convention used for the type-C (long root first) and
type-D checks.

Cartan convention: ``cartan[i][j] = <alpha_{j+1}, alpha_{i+1}^vee>`` so that
row i is the coroot ``alpha_{i+1}^vee`` paired against all simple roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

SUPPORTED_RANKS = {
    "A": range(1, 9),
    "B": range(2, 7),
    "C": range(2, 7),
    "D": range(3, 7),
    "E": range(6, 8),
    "F": range(4, 5),
    "G": range(2, 3),
}

# |Delta_+| per type, used as an enumeration cross-check.
_NUM_POSITIVE = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


class RootSystemError(ValueError):
    """Invalid Cartan type or malformed root-system input."""


def _chain(n):
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
        if i + 1 < n:
            c[i][i + 1] = -1
            c[i + 1][i] = -1
    return c


def _cartan_matrix(letter, n):
    c = _chain(n)
    if letter == "B":
        # alpha_n short: <alpha_{n-1}, alpha_n^vee> = -2
        c[n - 1][n - 2] = -2
    elif letter == "C":
        # alpha_n long: <alpha_n, alpha_{n-1}^vee> = -2
        c[n - 2][n - 1] = -2
    elif letter == "D":
        if n >= 3:
            c[n - 1][n - 2] = 0
            c[n - 2][n - 1] = 0
            c[n - 1][n - 3] = -1
            c[n - 3][n - 1] = -1
    elif letter == "E":
        # Bourbaki: node 2 attaches to node 4 of the A-chain 1-3-4-5-6(-7)
        chain = [1, 3, 4, 5, 6, 7][: n - 1]
        c = [[0] * n for _ in range(n)]
        for i in range(n):
            c[i][i] = 2
        for a, b in zip(chain, chain[1:]):
            c[a - 1][b - 1] = c[b - 1][a - 1] = -1
        c[1][3] = c[3][1] = -1
    elif letter == "F":
        # alpha_1, alpha_2 long; alpha_3, alpha_4 short
        c[2][1] = -2
        c[1][2] = -1
    elif letter == "G":
        # alpha_1 short, alpha_2 long
        c[0][1] = -3
        c[1][0] = -1
    return c


@dataclass(frozen=True)
class RootSystem:
    """Cartan data plus the full list of positive roots and coroots."""

    type_letter: str
    rank: int
    cartan: tuple
    positive_roots: tuple
    positive_coroots: tuple
    theta: tuple
    reversed_labels: bool = False

    @property
    def rho(self):
        """All-ones vector of fundamental-weight coefficients."""
        return (1,) * self.rank

    @property
    def fundamental_weights(self):
        """Pairing table <alpha_j^vee, omega_i> = delta_ij."""
        n = self.rank
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

    @cached_property
    def root_index(self):
        return {r: k for k, r in enumerate(self.positive_roots)}

    @cached_property
    def coroot_of_root(self):
        return dict(zip(self.positive_roots, self.positive_coroots))

    def simple_root(self, i):
        return tuple(int(j == i - 1) for j in range(self.rank))

    def __repr__(self):
        tag = "-rev" if self.reversed_labels else ""
        return f"RootSystem({self.type_letter}{self.rank}{tag})"


def _simple_reflection_on_root(cartan, i, root):
    """s_{i+1} acting on a root vector in simple-root coordinates."""
    pairing = sum(cartan[i][j] * root[j] for j in range(len(root)))
    out = list(root)
    out[i] -= pairing
    return tuple(out)


def _simple_reflection_on_coroot(cartan, i, coroot):
    pairing = sum(cartan[j][i] * coroot[j] for j in range(len(coroot)))
    out = list(coroot)
    out[i] -= pairing
    return tuple(out)


@lru_cache(maxsize=None)
def build_root_system(type_letter, rank, reverse_labels=False):
    """Construct the root system, enumerating Delta_+ by reflection closure.

    ``reverse_labels`` relabels i -> rank+1-i; for type C this is the
    convention with the long simple root first (alpha_1 = 2*eps_1).
    """
    letter = str(type_letter).upper()
    if letter not in SUPPORTED_RANKS or rank not in SUPPORTED_RANKS[letter]:
        raise RootSystemError(f"unsupported Cartan type {type_letter}{rank}")
    if reverse_labels and letter not in ("C", "D"):
        raise RootSystemError("reversed labeling is only defined for types C and D")
    cartan = _cartan_matrix(letter, rank)
    if reverse_labels:
        cartan = [[cartan[rank - 1 - i][rank - 1 - j] for j in range(rank)]
                  for i in range(rank)]
    cartan = tuple(tuple(row) for row in cartan)

    simples = [(tuple(int(j == i) for j in range(rank)),) * 2 for i in range(rank)]
    seen = {p[0]: p[1] for p in simples}
    frontier = list(seen.items())
    while frontier:
        nxt = []
        for root, coroot in frontier:
            for i in range(rank):
                r2 = _simple_reflection_on_root(cartan, i, root)
                if all(x >= 0 for x in r2) and r2 not in seen:
                    c2 = _simple_reflection_on_coroot(cartan, i, coroot)
                    seen[r2] = c2
                    nxt.append((r2, c2))
        frontier = nxt

    expected = _NUM_POSITIVE[letter](rank)
    if len(seen) != expected:
        raise RootSystemError(
            f"enumerated {len(seen)} positive roots for {letter}{rank}, expected {expected}"
        )
    roots = sorted(seen, key=lambda r: (sum(r), r))
    top = roots[-1]
    if any(any(t - a < 0 for t, a in zip(top, r)) for r in roots):
        raise RootSystemError("highest root is not dominant over Delta_+")
    return RootSystem(
        type_letter=letter,
        rank=rank,
        cartan=cartan,
        positive_roots=tuple(roots),
        positive_coroots=tuple(seen[r] for r in roots),
        theta=top,
        reversed_labels=bool(reverse_labels),
    )


def pairing(coroot_vector, weight_index):
    """<alpha^vee, omega_i>: the omega-coefficient is just coordinate i."""
    if not 1 <= weight_index <= len(coroot_vector):
        raise RootSystemError(f"weight index {weight_index} out of range")
    return coroot_vector[weight_index - 1]


def height(coroot_vector):
    """ht(lambda^vee) = <rho, lambda^vee> = sum of coroot coordinates."""
    return sum(coroot_vector)


def pair_root_coroot(rs, root, coroot):
    """<beta, lambda^vee> for beta in root coords, lambda^vee in coroot coords."""
    if len(root) != rs.rank or len(coroot) != rs.rank:
        raise RootSystemError("vector of wrong rank")
    return sum(
        coroot[i] * rs.cartan[i][j] * root[j]
        for i in range(rs.rank)
        for j in range(rs.rank)
    )


def reflect_root(rs, alpha, beta):
    """r_alpha(beta), both in root coordinates."""
    av = rs.coroot_of_root[alpha]
    k = pair_root_coroot(rs, beta, av)
    return tuple(b - k * a for b, a in zip(beta, alpha))


def reflection_length(rs, alpha):
    """l(r_alpha) counted as inversions of r_alpha on Delta_+."""
    neg = 0
    for beta in rs.positive_roots:
        img = reflect_root(rs, alpha, beta)
        if all(x <= 0 for x in img):
            neg += 1
    return neg


def short_coroot_chain_set(rs):
    """Positive coroots alpha^vee with l(r_alpha) = <alpha^vee, 2 rho> - 1.

    These are the only coroots that can contribute quantum terms in the
    divisor multiplication rule.
    """
    out = []
    for alpha, av in zip(rs.positive_roots, rs.positive_coroots):
        if reflection_length(rs, alpha) == 2 * height(av) - 1:
            out.append(av)
    return out


@dataclass(frozen=True)
class ParabolicData:
    """The decomposition Delta_+ = Delta_{P,+} u Delta_+^P for I_P subset I."""

    parent: RootSystem
    I_P: tuple
    I_comp: tuple
    delta_P_plus: tuple
    delta_plus_P: tuple
    two_rho_P: tuple

    def eta_P(self, coroot):
        """Project a coroot vector to the coordinates indexed by I^P."""
        return tuple(coroot[i - 1] for i in self.I_comp)

    def __repr__(self):
        return f"Parabolic({self.parent!r}, I_P={set(self.I_P) or '{}'})"


@lru_cache(maxsize=None)
def parabolic(rs, I_P=()):
    """Build ParabolicData for the subset I_P of {1..rank}."""
    ip = tuple(sorted(set(I_P)))
    if any(not 1 <= i <= rs.rank for i in ip):
        raise RootSystemError(f"I_P {I_P} not a subset of 1..{rs.rank}")
    comp = tuple(i for i in range(1, rs.rank + 1) if i not in ip)
    inside, outside = [], []
    for alpha in rs.positive_roots:
        if all(alpha[i - 1] == 0 for i in comp):
            inside.append(alpha)
        else:
            outside.append(alpha)
    two_rho_p = tuple(sum(col) for col in zip(*inside)) if inside else (0,) * rs.rank
    return ParabolicData(
        parent=rs,
        I_P=ip,
        I_comp=comp,
        delta_P_plus=tuple(inside),
        delta_plus_P=tuple(outside),
        two_rho_P=two_rho_p,
    )
