"""Compositions, permutations, orderings and diagram statistics.

Everything here is exact: weights are ints, the coupling k is a Fraction,
spectral vectors are tuples of Fractions.  Compositions are plain tuples of
ints; entries may be negative where a function documents it.  Permutations
are one-line tuples w of length n with w[i] = image of slot i (0-based).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

from .errors import CellError, ParamError

# ---------------------------------------------------------------------------
# parameter object


class Params:
    """Rank n and coupling k for the rational Dunkl setting of type A.

    k must be an exact nonnegative rational: int, Fraction, or a string
    like "1/2".  Floats are rejected; an inexact coupling would poison
    every exact table built from it.

    Example
    -------
    >>> p = Params(2, "1/2")
    >>> p.k
    Fraction(1, 2)
    >>> p.shift0
    Fraction(1, 2)
    """

    __slots__ = ("n", "k")

    def __init__(self, n, k):
        if not isinstance(n, int) or n < 1:
            raise ParamError(f"rank n must be a positive int, got {n!r}")
        if isinstance(k, float):
            raise ParamError(
                "coupling k must be exact (int, Fraction, or 'p/q' string); "
                f"got float {k!r}"
            )
        try:
            kf = Fraction(k)
        except (TypeError, ValueError) as exc:
            raise ParamError(f"cannot parse coupling k from {k!r}") from exc
        if kf < 0:
            raise ParamError(f"coupling k must be >= 0, got {kf}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k", kf)

    def __setattr__(self, name, value):
        raise AttributeError("Params is immutable")

    @property
    def shift0(self) -> Fraction:
        """k*(n-1), the threshold exponent of the orthant integrals."""
        return self.k * (self.n - 1)

    def __eq__(self, other):
        return (
            isinstance(other, Params) and self.n == other.n and self.k == other.k
        )

    def __hash__(self):
        return hash((self.n, self.k))

    def __repr__(self):
        return f"Params(n={self.n}, k={self.k})"


# ---------------------------------------------------------------------------
# compositions


def as_composition(seq) -> tuple:
    """Coerce to a tuple of ints, rejecting floats and other inexact types."""
    out = []
    for v in seq:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ParamError(f"composition entries must be ints, got {v!r}")
        out.append(v)
    if not out:
        raise ParamError("composition must have at least one entry")
    return tuple(out)


def weight(comp) -> int:
    return sum(comp)


def sort_desc(comp) -> tuple:
    """Decreasing rearrangement: the dominant-orbit representative."""
    return tuple(sorted(comp, reverse=True))


def is_partition(comp) -> bool:
    return all(comp[i] >= comp[i + 1] for i in range(len(comp) - 1)) and comp[-1] >= 0


def comp_to_json(comp) -> dict:
    return {"eta": list(comp)}


def comp_from_json(obj) -> tuple:
    return as_composition(obj["eta"])


# ---------------------------------------------------------------------------
# permutations (one-line tuples, 0-based)


def perm_identity(n) -> tuple:
    return tuple(range(n))


def perm_compose(u, v) -> tuple:
    """(u o v)(i) = u(v(i))."""
    return tuple(u[v[i]] for i in range(len(u)))


def perm_inverse(w) -> tuple:
    inv = [0] * len(w)
    for i, wi in enumerate(w):
        inv[wi] = i
    return tuple(inv)


def perm_apply(w, vec) -> tuple:
    """Place vec[i] at slot w[i]: (w . vec)[w[i]] = vec[i]."""
    out = [None] * len(vec)
    for i, v in enumerate(vec):
        out[w[i]] = v
    return tuple(out)


def perm_length(w) -> int:
    """Coxeter length = number of inversions of the one-line word."""
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def adjacent_transposition(n, i) -> tuple:
    """s_i swapping slots i and i+1 (0-based i in [0, n-2])."""
    if not 0 <= i < n - 1:
        raise ParamError(f"transposition index {i} out of range for n={n}")
    w = list(range(n))
    w[i], w[i + 1] = w[i + 1], w[i]
    return tuple(w)


def orbit_min_perm(comp) -> tuple:
    """Shortest permutation w with w . sort_desc(comp) = comp.

    Built by a stable argsort on (-value, slot); ties go to the earlier
    slot, which is what makes the result length-minimal.

    Example
    -------
    >>> orbit_min_perm((0, 2, 1))
    (1, 2, 0)
    """
    order = sorted(range(len(comp)), key=lambda i: (-comp[i], i))
    # order[r] = slot of the r-th largest entry, so value r goes to slot order[r]
    return tuple(order)


def reduced_word(w) -> tuple:
    """A reduced word (i_1, ..., i_L) with s_{i_1} ... s_{i_L} = w."""
    cur = list(w)
    rev = []
    changed = True
    while changed:
        changed = False
        for i in range(len(cur) - 1):
            if cur[i] > cur[i + 1]:
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                rev.append(i)
                changed = True
    return tuple(reversed(rev))


def bruhat_leq(u, v) -> bool:
    """Bruhat order on S_n: True iff u <= v.

    Walks one fixed reduced word of v and grows the set of subword
    products that stay reduced; u <= v iff u shows up.  Fine for the
    small ranks used here (the set is bounded by n!).
    """
    n = len(u)
    if len(v) != n:
        raise ParamError("permutations must have equal rank")
    lu, lv = perm_length(u), perm_length(v)
    if lu > lv:
        return False
    if lu == lv:
        return u == v
    reach = {perm_identity(n)}
    for i in reduced_word(v):
        s = adjacent_transposition(n, i)
        grown = set()
        for r in reach:
            rs = perm_compose(r, s)
            if perm_length(rs) > perm_length(r):
                grown.add(rs)
        reach |= grown
    return tuple(u) in reach


# ---------------------------------------------------------------------------
# orderings


def dominance_partitions(a, b) -> str:
    """Dominance comparison of two partitions of equal weight.

    Returns one of "less", "equal", "greater", "incomparable".
    Unequal weights are incomparable by convention.
    """
    if len(a) != len(b) or weight(a) != weight(b):
        return "incomparable"
    if tuple(a) == tuple(b):
        return "equal"
    le = ge = True
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa > sb:
            le = False
        if sa < sb:
            ge = False
    if le:
        return "less"
    if ge:
        return "greater"
    return "incomparable"


def dominance_compositions(a, b) -> str:
    """Composition refinement of dominance: a <= b iff sort_desc(a) is
    dominated strictly, or the sorted parts agree and the minimal orbit
    permutation of b precedes that of a in Bruhat order.

    With this order the nonsymmetric Jack polynomials are unitriangular
    on monomials.  Returns the same labels as dominance_partitions.
    """
    a = tuple(a)
    b = tuple(b)
    if a == b:
        return "equal"
    part = dominance_partitions(sort_desc(a), sort_desc(b))
    if part in ("less", "greater", "incomparable"):
        return part
    # equal sorted parts: compare orbit permutations, reversed
    wa, wb = orbit_min_perm(a), orbit_min_perm(b)
    if bruhat_leq(wb, wa):
        return "less"
    if bruhat_leq(wa, wb):
        return "greater"
    return "incomparable"


def dominance_leq(a, b) -> bool:
    return dominance_compositions(a, b) in ("less", "equal")


# ---------------------------------------------------------------------------
# spectral vectors and diagram statistics


def spectral_vector(params, comp) -> tuple:
    """Exact Cherednik spectrum of a composition (entries may be negative).

    Entry j counts, with coupling weight k, the slots before j holding a
    part >= comp[j] and the slots after j holding a part > comp[j].

    Example
    -------
    >>> spectral_vector(Params(2, 1), (0, 1))
    (Fraction(-1, 1), Fraction(1, 1))
    """
    k = params.k
    n = params.n
    comp = tuple(comp)
    if len(comp) != n:
        raise ParamError(f"composition length {len(comp)} != rank {n}")
    out = []
    for j, cj in enumerate(comp):
        before = sum(1 for i in range(j) if comp[i] >= cj)
        after = sum(1 for i in range(j + 1, n) if comp[i] > cj)
        out.append(Fraction(cj) - k * (before + after))
    return tuple(out)


def cells(comp):
    """Iterate the diagram cells (i, j), 1-based, row i of length comp[i-1]."""
    for i, ci in enumerate(comp, start=1):
        for j in range(1, ci + 1):
            yield (i, j)


def cell_stats(comp, i, j) -> tuple:
    """(arm, leg, coleg) of the 1-based cell (i, j).

    arm   = comp[i-1] - j
    leg   = #{l > i : j <= comp[l] <= comp[i]} + #{l < i : j <= comp[l]+1 <= comp[i]}
    coleg = #{l < i : comp[l] >= comp[i]} + #{l > i : comp[l] > comp[i]}

    The coleg is column-independent and reduces to i-1 when comp is a
    partition.  Requires a nonnegative composition.
    """
    comp = tuple(comp)
    n = len(comp)
    if any(c < 0 for c in comp):
        raise CellError("diagram statistics need a nonnegative composition")
    if not 1 <= i <= n:
        raise CellError(f"row {i} out of range 1..{n}")
    ci = comp[i - 1]
    if not 1 <= j <= ci:
        raise CellError(f"column {j} out of range 1..{ci} in row {i}")
    arm = ci - j
    leg = 0
    for l in range(i, n):  # slots strictly below row i (0-based l >= i)
        if j <= comp[l] <= ci:
            leg += 1
    for l in range(i - 1):  # slots strictly above row i
        if j <= comp[l] + 1 <= ci:
            leg += 1
    coleg = 0
    for l in range(i - 1):
        if comp[l] >= ci:
            coleg += 1
    for l in range(i, n):
        if comp[l] > ci:
            coleg += 1
    return arm, leg, coleg


def generalized_pochhammer_coeffs(params, comp) -> tuple:
    """Coefficients (ascending) of the generalized Pochhammer symbol as a
    polynomial in the formal parameter, for the sorted parts of comp.

    The symbol is prod_j prod_{r=0}^{parts_j - 1} (mu - k*(j-1) + r) with
    parts = sort_desc(comp); it is a monic polynomial of degree weight(comp).

    Example
    -------
    >>> generalized_pochhammer_coeffs(Params(2, 1), (2, 1))  # mu(mu+1)(mu-1)
    (Fraction(0, 1), Fraction(-1, 1), Fraction(0, 1), Fraction(1, 1))
    """
    parts = sort_desc(comp)
    if parts[-1] < 0:
        raise ParamError("generalized Pochhammer needs a nonnegative composition")
    k = params.k
    coeffs = [Fraction(1)]
    for idx, pj in enumerate(parts):
        for r in range(pj):
            root = -k * idx + r  # factor (mu + root)
            nxt = [Fraction(0)] * (len(coeffs) + 1)
            for d, c in enumerate(coeffs):
                nxt[d] += c * root
                nxt[d + 1] += c
            coeffs = nxt
    return tuple(coeffs)


def generalized_pochhammer_num(params, mu, comp):
    """Numeric generalized Pochhammer symbol at a concrete mu (complex ok)."""
    parts = sort_desc(comp)
    if parts[-1] < 0:
        raise ParamError("generalized Pochhammer needs a nonnegative composition")
    kk = params.k if isinstance(mu, Fraction) else float(params.k)
    out = mu * 0 + 1
    for idx, pj in enumerate(parts):
        base = mu - kk * idx
        for r in range(pj):
            out = out * (base + r)
    return out


# ---------------------------------------------------------------------------
# enumeration (graded reverse-lexicographic: by weight, then lex-descending)


def compositions_of_weight(n, m):
    """Yield all length-n compositions of weight m, lex-descending.

    >>> list(compositions_of_weight(2, 1))
    [(1, 0), (0, 1)]
    """
    if n == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in compositions_of_weight(n - 1, m - first):
            yield (first,) + rest


def count_compositions(n, m) -> int:
    return comb(m + n - 1, m)


def partitions_of_weight(n, m):
    """Yield partitions of m with at most n parts, padded to length n,
    lex-descending."""

    def rec(maxpart, rem, slots):
        if slots == 1:
            if rem <= maxpart:
                yield (rem,)
            return
        for first in range(min(maxpart, rem), -1, -1):
            if first == 0 and rem > 0:
                return
            for rest in rec(first, rem - first, slots - 1):
                yield (first,) + rest

    yield from rec(m, m, n)


def compositions_up_to(n, maxweight):
    """All compositions graded by weight, lex-descending within a grade."""
    for m in range(maxweight + 1):
        yield from compositions_of_weight(n, m)


def orbit_of(comp):
    """Distinct rearrangements of comp, lex-descending."""
    seen = sorted(set(itertools.permutations(comp)), reverse=True)
    return seen
