import itertools
import random
from fractions import Fraction
from functools import lru_cache

import pytest

from jackdunkl.combinatorics import (
    Params,
    adjacent_transposition,
    as_composition,
    bruhat_leq,
    cell_stats,
    cells,
    comp_from_json,
    comp_to_json,
    compositions_of_weight,
    compositions_up_to,
    count_compositions,
    dominance_compositions,
    dominance_partitions,
    generalized_pochhammer_coeffs,
    generalized_pochhammer_num,
    is_partition,
    orbit_min_perm,
    orbit_of,
    partitions_of_weight,
    perm_apply,
    perm_compose,
    perm_identity,
    perm_inverse,
    perm_length,
    reduced_word,
    sort_desc,
    spectral_vector,
    weight,
)
from jackdunkl.errors import CellError, ParamError


# ---------------------------------------------------------------------------
# independent oracles


def brute_min_perms(comp):
    """All minimal-length permutations sending sort_desc(comp) to comp."""
    n = len(comp)
    target = tuple(comp)
    parts = sort_desc(comp)
    best = None
    found = []
    for w in itertools.permutations(range(n)):
        if perm_apply(w, parts) == target:
            l = perm_length(w)
            if best is None or l < best:
                best = l
                found = [w]
            elif l == best:
                found.append(w)
    return found


@lru_cache(maxsize=None)
def bruhat_oracle(u, v):
    """Downward closure of the covering relation: u <= v iff u is reached
    from v by length-decreasing transposition multiplications."""
    if u == v:
        return True
    lu, lv = perm_length(u), perm_length(v)
    if lu >= lv:
        return False
    n = len(v)
    for i in range(n):
        for j in range(i + 1, n):
            vt = list(v)
            vt[i], vt[j] = vt[j], vt[i]
            vt = tuple(vt)
            if perm_length(vt) < lv and bruhat_oracle(u, vt):
                return True
    return False


# ---------------------------------------------------------------------------
# params


def test_params_rejects_float_coupling():
    with pytest.raises(ParamError):
        Params(2, 0.5)


def test_params_parses_string_coupling():
    p = Params(3, "5/3")
    assert p.k == Fraction(5, 3)
    assert p.shift0 == Fraction(10, 3)


def test_params_rejects_negative_and_bad_rank():
    with pytest.raises(ParamError):
        Params(2, -1)
    with pytest.raises(ParamError):
        Params(0, 1)
    with pytest.raises(ParamError):
        Params(2, "abc")


def test_params_immutable_hashable():
    p = Params(2, 1)
    with pytest.raises(AttributeError):
        p.k = Fraction(2)
    assert hash(Params(2, 1)) == hash(Params(2, "1/1"))
    assert Params(2, 1) == Params(2, Fraction(1))


def test_as_composition_rejects_inexact():
    with pytest.raises(ParamError):
        as_composition([1.0, 2])
    with pytest.raises(ParamError):
        as_composition([True, 0])
    with pytest.raises(ParamError):
        as_composition([])
    assert as_composition([0, -2, 3]) == (0, -2, 3)


# ---------------------------------------------------------------------------
# permutations


def test_perm_basics():
    w = (2, 0, 1)
    assert perm_compose(w, perm_inverse(w)) == perm_identity(3)
    assert perm_apply(perm_identity(3), (5, 6, 7)) == (5, 6, 7)
    assert perm_length(perm_identity(4)) == 0
    assert perm_length((3, 2, 1, 0)) == 6


def test_perm_apply_is_action():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(2, 5)
        u = tuple(rng.sample(range(n), n))
        v = tuple(rng.sample(range(n), n))
        vec = tuple(rng.randint(-3, 5) for _ in range(n))
        assert perm_apply(u, perm_apply(v, vec)) == perm_apply(
            perm_compose(u, v), vec
        )


def test_reduced_word_reconstructs():
    for n in (2, 3, 4):
        for w in itertools.permutations(range(n)):
            word = reduced_word(w)
            assert len(word) == perm_length(w)
            acc = perm_identity(n)
            for i in word:
                acc = perm_compose(acc, adjacent_transposition(n, i))
            assert acc == w


def test_orbit_min_perm_matches_brute_force():
    for n in (2, 3, 4):
        for m in range(5):
            for comp in compositions_of_weight(n, m):
                mins = brute_min_perms(comp)
                assert len(mins) == 1, comp
                assert orbit_min_perm(comp) == mins[0]


def test_bruhat_matches_covering_oracle():
    for n in (2, 3, 4):
        for u in itertools.permutations(range(n)):
            for v in itertools.permutations(range(n)):
                assert bruhat_leq(u, v) == bruhat_oracle(u, v), (u, v)


# ---------------------------------------------------------------------------
# orderings


def test_dominance_partitions_frozen():
    assert dominance_partitions((2, 0), (1, 1)) == "greater"
    assert dominance_partitions((1, 1), (2, 0)) == "less"
    assert dominance_partitions((2, 2, 0), (3, 1, 0)) == "less"
    assert dominance_partitions((3, 1, 1, 1), (2, 2, 2, 0)) == "incomparable"
    assert dominance_partitions((2, 1), (2, 1)) == "equal"
    assert dominance_partitions((2, 0), (1, 0)) == "incomparable"


def test_dominance_compositions_frozen():
    # later slots sink lower in the order
    assert dominance_compositions((0, 1), (1, 0)) == "less"
    assert dominance_compositions((1, 0), (0, 1)) == "greater"
    assert dominance_compositions((1, 0, 1), (1, 1, 0)) == "less"
    assert dominance_compositions((0, 1, 1), (1, 0, 1)) == "less"
    assert dominance_compositions((1, 1), (0, 2)) == "less"
    assert dominance_compositions((2, 0, 0), (1, 1, 1)) == "incomparable"


def test_dominance_compositions_is_partial_order():
    comps = list(compositions_of_weight(3, 3))
    rel = {
        (a, b): dominance_compositions(a, b) in ("less", "equal")
        for a in comps
        for b in comps
    }
    for a in comps:
        assert rel[(a, a)]
        for b in comps:
            if rel[(a, b)] and rel[(b, a)]:
                assert a == b
            for c in comps:
                if rel[(a, b)] and rel[(b, c)]:
                    assert rel[(a, c)], (a, b, c)


# ---------------------------------------------------------------------------
# spectral vectors, cells, pochhammer


def test_spectral_vector_frozen():
    p = Params(2, "3/2")
    assert spectral_vector(p, (0, 1)) == (Fraction(-3, 2), Fraction(1))
    assert spectral_vector(p, (1, 0)) == (Fraction(1), Fraction(-3, 2))
    p1 = Params(3, 1)
    assert spectral_vector(p1, (0, 0, 0)) == (0, -1, -2)


def test_spectral_vector_on_partitions_is_shifted():
    for n, kk in ((2, Fraction(1, 2)), (3, Fraction(2))):
        p = Params(n, kk)
        for m in range(5):
            for lam in partitions_of_weight(n, m):
                got = spectral_vector(p, lam)
                want = tuple(Fraction(lam[j]) - kk * j for j in range(n))
                assert got == want


def test_spectral_vector_orbit_distinct():
    # spectra separate the orbit for generic k
    p = Params(3, Fraction(1, 3))
    for m in range(5):
        for lam in partitions_of_weight(3, m):
            specs = {spectral_vector(p, c) for c in orbit_of(lam)}
            assert len(specs) == len(orbit_of(lam))


def test_cell_stats_frozen():
    comp = (2, 1)
    assert sorted(cells(comp)) == [(1, 1), (1, 2), (2, 1)]
    assert cell_stats(comp, 1, 1) == (1, 1, 0)
    assert cell_stats(comp, 1, 2) == (0, 0, 0)
    assert cell_stats(comp, 2, 1) == (0, 0, 1)
    with pytest.raises(CellError):
        cell_stats(comp, 2, 2)
    with pytest.raises(CellError):
        cell_stats((-1, 0), 1, 1)


def test_cell_stats_partition_coleg_is_row_index():
    for lam in partitions_of_weight(3, 4):
        for (i, j) in cells(lam):
            _, _, coleg = cell_stats(lam, i, j)
            assert coleg == i - 1


def test_pochhammer_coeffs_frozen():
    p = Params(2, 1)
    # sorted parts (2,1): mu(mu+1)(mu-1) = mu^3 - mu
    assert generalized_pochhammer_coeffs(p, (1, 2)) == (
        Fraction(0),
        Fraction(-1),
        Fraction(0),
        Fraction(1),
    )
    assert generalized_pochhammer_coeffs(p, (0, 0)) == (Fraction(1),)


def test_pochhammer_num_matches_coeffs():
    rng = random.Random(11)
    p = Params(3, "1/2")
    for m in range(5):
        for comp in compositions_of_weight(3, m):
            coeffs = generalized_pochhammer_coeffs(p, comp)
            mu = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            direct = generalized_pochhammer_num(p, mu, comp)
            horner = 0j
            for c in reversed(coeffs):
                horner = horner * mu + complex(c)
            assert abs(horner - direct) <= 1e-12 * max(1.0, abs(direct))


def test_pochhammer_exact_fraction_argument():
    p = Params(2, "1/2")
    val = generalized_pochhammer_num(p, Fraction(3, 2), (2, 1))
    # (3/2)(5/2) * (3/2 - 1/2) = 15/4
    assert val == Fraction(15, 4)


# ---------------------------------------------------------------------------
# enumeration


def test_compositions_enumeration_order_and_count():
    got = list(compositions_of_weight(2, 1))
    assert got == [(1, 0), (0, 1)]
    got3 = list(compositions_of_weight(3, 2))
    assert got3[0] == (2, 0, 0)
    assert got3[-1] == (0, 0, 2)
    for n, m in ((2, 5), (3, 4), (4, 3)):
        allc = list(compositions_of_weight(n, m))
        assert len(allc) == count_compositions(n, m)
        assert allc == sorted(allc, reverse=True)
        assert len(set(allc)) == len(allc)


def test_partitions_enumeration():
    got = list(partitions_of_weight(3, 4))
    assert got == [(4, 0, 0), (3, 1, 0), (2, 2, 0), (2, 1, 1)]
    for lam in got:
        assert is_partition(lam) and weight(lam) == 4
    # partitions are exactly the weakly decreasing compositions
    want = [c for c in compositions_of_weight(3, 4) if is_partition(c)]
    assert got == want


def test_compositions_up_to_graded():
    seq = list(compositions_up_to(2, 3))
    weights = [weight(c) for c in seq]
    assert weights == sorted(weights)
    assert len(seq) == sum(count_compositions(2, m) for m in range(4))


def test_json_roundtrip():
    comp = (0, 2, 1)
    assert comp_from_json(comp_to_json(comp)) == comp
    assert comp_to_json(comp) == {"eta": [0, 2, 1]}
