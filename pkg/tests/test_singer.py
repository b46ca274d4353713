"""Singer construction and Sidon/B_h[g] structure."""

import itertools

import numpy as np
import pytest

from flatlab import singer
from flatlab.errors import LimitExceeded, NotPrime, OutOfRange

PRIMES_31 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)


def brute_force_lex_least_pds(p):
    """Independent oracle: exhaustive search over (p+1)-subsets of Z/qZ in
    lexicographic order for the first perfect difference set."""
    q = p * p + p + 1
    for cand in itertools.combinations(range(q), p + 1):
        seen = set()
        ok = True
        for a, b in itertools.permutations(cand, 2):
            d = (a - b) % q
            if d in seen:
                ok = False
                break
            seen.add(d)
        if ok and len(seen) == q - 1:
            return cand
    raise AssertionError(f"no perfect difference set for p={p}")


class TestSingerSet:
    def test_p2_matches_exhaustive_search(self):
        assert brute_force_lex_least_pds(2) == (0, 1, 3)
        s = singer.singer_set(2)
        assert (s.q, s.residues) == (7, (0, 1, 3))

    def test_p3_matches_exhaustive_search(self):
        assert brute_force_lex_least_pds(3) == (0, 1, 3, 9)
        s = singer.singer_set(3)
        assert (s.q, s.residues) == (13, (0, 1, 3, 9))

    def test_not_prime(self):
        with pytest.raises(NotPrime):
            singer.singer_set(4)
        with pytest.raises(NotPrime):
            singer.singer_set(1)

    def test_limit(self):
        with pytest.raises(LimitExceeded):
            singer.singer_set(503)

    def test_deterministic_and_canonical(self):
        # translate canonicalization: output starts at 0 and is the least
        # tuple among all q translates of itself
        for p in (5, 7, 13):
            s1 = singer.singer_set(p)
            s2 = singer.singer_set(p)
            assert s1.residues == s2.residues
            assert s1.residues[0] == 0
            base = s1.residues
            for c in range(1, s1.q):
                shifted = tuple(sorted((r + c) % s1.q for r in base))
                assert base <= shifted

    @pytest.mark.parametrize("p", PRIMES_31)
    def test_all_small_primes_verify(self, p):
        s = singer.singer_set(p)
        assert len(s.residues) == p + 1
        assert singer.verify_perfect_difference_set(s.residues, s.q)
        assert singer.is_sidon(s.residues)
        assert singer.lindstrom_bound_check(s.residues, s.q - 1)

    def test_larger_prime(self):
        s = singer.singer_set(127)
        assert len(s.residues) == 128
        assert singer.verify_perfect_difference_set(s.residues, s.q)


class TestVerifier:
    def test_examples(self):
        assert singer.verify_perfect_difference_set((0, 1, 3), 7)
        assert not singer.verify_perfect_difference_set((0, 1, 2), 7)
        assert singer.verify_perfect_difference_set((0, 1), 3)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            singer.verify_perfect_difference_set((0, 7), 7)
        with pytest.raises(OutOfRange):
            singer.verify_perfect_difference_set((-1, 3), 7)


class TestSidon:
    def test_examples(self):
        assert singer.is_sidon((1, 2, 5, 11))
        assert not singer.is_sidon((1, 2, 3))
        assert singer.is_sidon((5,))
        assert singer.is_sidon(())

    def test_bhg_examples(self):
        assert singer.is_bhg((1, 2, 5, 11), 2, 1)
        assert singer.is_bhg((1, 2, 3), 2, 2)   # the sum 4 = 1+3 = 2+2
        assert not singer.is_bhg((1, 2, 3), 2, 1)

    def test_b2_1_equals_sidon_on_random_supports(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            size = int(rng.integers(1, 13))
            sup = tuple(sorted(int(x) for x in
                               rng.choice(60, size=size, replace=False)))
            assert singer.is_bhg(sup, 2, 1) == singer.is_sidon(sup)

    def test_b3_sets_may_have_repeated_differences(self):
        # {0,1,2,4} is B_3[3] but not Sidon; distinctness of differences is
        # a B_2[1] phenomenon only
        assert not singer.is_sidon((0, 1, 2, 4))
        assert singer.is_bhg((0, 1, 2, 4), 3, 3)


class TestDifferenceStats:
    def test_arithmetic_progression(self):
        stats = singer.difference_stats((1, 2, 3, 4, 5))
        assert stats.multiplicities == {1: 4, 2: 3, 3: 2, 4: 1}
        assert stats.distinct == 4
        assert stats.max_multiplicity == 4

    def test_consecutive_run_has_r_minus_one_differences(self):
        # {1..R} has differences 1..R-1, so R-1 distinct values and the
        # largest multiplicity R-1
        for r in (4, 9, 17):
            stats = singer.difference_stats(tuple(range(1, r + 1)))
            assert stats.distinct == r - 1
            assert stats.max_multiplicity == r - 1

    def test_sidon_support(self):
        stats = singer.difference_stats((1, 2, 5, 11))
        assert set(stats.multiplicities.values()) == {1}
        assert stats.distinct == 6
        assert stats.max_multiplicity == 1

    def test_singleton(self):
        stats = singer.difference_stats((7,))
        assert stats.multiplicities == {}
        assert stats.distinct == 0
        assert stats.max_multiplicity == 0

    def test_total_count_on_random_supports(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            size = int(rng.integers(1, 51))
            sup = tuple(sorted(int(x) for x in
                               rng.choice(500, size=size, replace=False)))
            stats = singer.difference_stats(sup)
            n = len(sup)
            assert sum(stats.multiplicities.values()) == n * (n - 1) // 2
            if n >= 2:
                assert (stats.max_multiplicity == 1) == singer.is_sidon(sup)
            else:
                assert stats.max_multiplicity == 0


class TestLindstrom:
    def test_examples(self):
        assert singer.lindstrom_bound_check((0, 1, 3, 9), 13)
        # 8 elements in [0, 16]: 8 >= sqrt(16) + 16^(1/4) + 1 = 7
        assert not singer.lindstrom_bound_check(tuple(range(8)), 16)
        assert singer.lindstrom_bound_check((0, 1), 1)

    def test_boundary_is_strict(self):
        # H = 16 makes the bound exactly 7; a 7-element set must fail
        assert not singer.lindstrom_bound_check(tuple(range(7)), 16)
        assert singer.lindstrom_bound_check(tuple(range(6)), 16)

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            singer.lindstrom_bound_check((0, 20), 13)
