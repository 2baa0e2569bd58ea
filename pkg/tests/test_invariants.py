import random
from fractions import Fraction

import pytest

from triplekit import (
    InvalidRankError,
    InvalidSubtripleError,
    SubtripleInvariants,
    TripleInvariants,
    dual_invariants,
    dual_subtriple,
    slope,
)

from conftest import random_dualizable_subtriple, random_triple


def test_slope_exact():
    assert slope(3, 2) == Fraction(3, 2)
    assert slope(-4, 2) == -2
    with pytest.raises(InvalidRankError):
        slope(1, 0)


def test_triple_validation_and_slopes():
    T = TripleInvariants(2, 1, 3, 0)
    assert T.total_rank == 3
    assert T.total_degree == 3
    assert T.mu1 == Fraction(3, 2)
    assert T.mu2 == 0
    assert T.mu == 1
    with pytest.raises(InvalidRankError):
        TripleInvariants(0, 1, 0, 0)
    with pytest.raises(InvalidRankError):
        TripleInvariants(1, -1, 0, 0)


def test_subtriple_zero_rank_carries_zero_degree():
    SubtripleInvariants(0, 1, 0, -3)
    with pytest.raises(InvalidSubtripleError):
        SubtripleInvariants(0, 1, 1, 0)
    with pytest.raises(InvalidSubtripleError):
        SubtripleInvariants(1, 0, 2, -1)
    with pytest.raises(InvalidRankError):
        SubtripleInvariants(-1, 0, 0, 0)
    assert SubtripleInvariants(0, 0, 0, 0).is_trivial


def test_fits_inside_and_equals_full():
    T = TripleInvariants(2, 1, 2, 1)
    assert SubtripleInvariants(1, 1, 0, 1).fits_inside(T)
    assert not SubtripleInvariants(3, 0, 0, 0).fits_inside(T)
    assert SubtripleInvariants(2, 1, 2, 1).equals_full(T)
    assert not SubtripleInvariants(2, 1, 2, 0).equals_full(T)


def test_dual_invariants_swaps_and_negates():
    T = TripleInvariants(2, 1, 2, 0)
    Td = dual_invariants(T)
    assert (Td.r1, Td.r2, Td.d1, Td.d2) == (1, 2, 0, -2)
    assert dual_invariants(Td) == T


def test_dual_subtriple_example():
    T = TripleInvariants(2, 1, 2, 1)
    Tp = SubtripleInvariants(1, 1, 0, 1)
    Tpd = dual_subtriple(T, Tp)
    assert (Tpd.r1p, Tpd.r2p, Tpd.d1p, Tpd.d2p) == (0, 1, 0, -2)


def test_dual_subtriple_rejects_torsion_quotients():
    T = TripleInvariants(2, 1, 2, 1)
    # full rank in a slot but not full degree leaves a rank-zero quotient
    # of nonzero degree, outside the invariant conventions
    with pytest.raises(InvalidSubtripleError):
        dual_subtriple(T, SubtripleInvariants(2, 0, 1, 0))
    with pytest.raises(InvalidSubtripleError):
        dual_subtriple(T, SubtripleInvariants(1, 1, 0, 0))
    with pytest.raises(InvalidSubtripleError):
        dual_subtriple(T, SubtripleInvariants(3, 1, 0, 1))


def test_dual_subtriple_is_involutive():
    rng = random.Random(20240811)
    for _ in range(500):
        T = random_triple(rng, max_rank=4, max_deg=8)
        Tp = random_dualizable_subtriple(rng, T, max_deg=8)
        Td = dual_invariants(T)
        Tpd = dual_subtriple(T, Tp)
        back = dual_subtriple(Td, Tpd)
        assert (back.r1p, back.r2p, back.d1p, back.d2p) == (
            Tp.r1p,
            Tp.r2p,
            Tp.d1p,
            Tp.d2p,
        )
