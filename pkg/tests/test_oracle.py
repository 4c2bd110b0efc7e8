import numpy as np
import pytest

from fpdim.oracle import (
    CHECK_PRIME,
    DEFAULT_PRIME,
    ConditionMatrix,
    CurveSamplingError,
    _eval_form,
    _exponents,
    _is_smooth_at,
    _MONOMIALS2,
    _Q1,
    _make_curve,
    condition_matrix,
    make_curve,
    oracle_dimension,
    rank_mod_p,
)
from fpdim.systems import FatPointSystem, binom, expected_dim


def test_monomial_order():
    assert _exponents(1) == ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    assert len(_exponents(2)) == 10
    assert len(_exponents(5)) == binom(8, 3)
    assert _exponents(2)[0] == (2, 0, 0, 0)


def test_make_curve_invariants():
    curve = make_curve(DEFAULT_PRIME, 13, seed=42)
    assert curve.r == 13
    p = curve.prime
    for pt in curve.points:
        assert _eval_form(_Q1, _MONOMIALS2, pt, p) == 0
        assert _eval_form(curve.quadric, _MONOMIALS2, pt, p) == 0
        assert _is_smooth_at(curve.quadric, pt, p)
        # normalized: first nonzero coordinate is 1
        first = next(v for v in pt if v)
        assert first == 1
    assert len(set(curve.points)) == 13


def test_make_curve_deterministic():
    a = make_curve(DEFAULT_PRIME, 7, seed=5)
    _make_curve.cache_clear()
    b = make_curve(DEFAULT_PRIME, 7, seed=5)
    assert a == b
    c = make_curve(DEFAULT_PRIME, 7, seed=6)
    assert a != c


def test_make_curve_r0_and_second_prime():
    assert make_curve(DEFAULT_PRIME, 0, seed=1).points == ()
    curve = make_curve(CHECK_PRIME, 5, seed=0)
    assert curve.r == 5


def test_make_curve_small_field_fails():
    with pytest.raises(CurveSamplingError):
        make_curve(5, 20, seed=0)


def test_make_curve_rejects_composite():
    with pytest.raises(ValueError):
        make_curve(2147483646, 3, seed=0)


def test_condition_matrix_shapes():
    curve = make_curve(DEFAULT_PRIME, 1, seed=0)
    mat = condition_matrix(1, curve, (1,))
    assert (mat.rows, mat.cols) == (1, 4)
    assert tuple(int(v) for v in mat.entries[0]) == curve.points[0]

    mat = condition_matrix(2, curve, (2,))
    assert (mat.rows, mat.cols) == (4, 10)

    curve13 = make_curve(DEFAULT_PRIME, 13, seed=0)
    mat = condition_matrix(3, curve13, (1,) * 13)
    assert (mat.rows, mat.cols) == (13, 20)


def test_condition_matrix_guards():
    curve = make_curve(DEFAULT_PRIME, 1, seed=0)
    with pytest.raises(ValueError):
        condition_matrix(2, curve, (1, 1))  # wrong alignment
    with pytest.raises(ValueError):
        condition_matrix(2, curve, (4,))  # above d + 1
    small = make_curve(31, 1, seed=0)
    with pytest.raises(ValueError):
        condition_matrix(40, small, (1,))  # p <= d


def test_rank_mod_p():
    p = DEFAULT_PRIME
    ident = ConditionMatrix(p, 0, (), np.eye(3, dtype=np.int64))
    assert rank_mod_p(ident) == 3
    zero = ConditionMatrix(p, 0, (), np.zeros((4, 6), dtype=np.int64))
    assert rank_mod_p(zero) == 0
    curve = make_curve(p, 1, seed=0)
    row = condition_matrix(1, curve, (1,))
    assert rank_mod_p(row) == 1


def test_rank_leaves_input_unmodified():
    rng = np.random.default_rng(3)
    entries = rng.integers(0, 97, size=(8, 5)).astype(np.int64)
    mat = ConditionMatrix(97, 4, (), entries)
    before = entries.copy()
    rank_mod_p(mat)
    assert np.array_equal(mat.entries, before)


def test_rank_needs_modular_pivoting():
    # row-echelon over the rationals would misjudge this one
    mat = ConditionMatrix(7, 0, (), np.array([[7, 1], [0, 7]], dtype=np.int64))
    assert rank_mod_p(mat) == 1


def test_oracle_dimension_anchors():
    assert oracle_dimension(FatPointSystem(1, (1, 1))).dim == 1
    report = oracle_dimension(FatPointSystem(2, (1,) * 8))
    assert report.dim == 1
    assert all(t.rank == 8 for t in report.trials)
    report = oracle_dimension(FatPointSystem(3, (1,) * 13))
    assert report.dim == 7
    assert all(t.rank == 12 for t in report.trials)
    assert report.stable


def test_oracle_empty_multiplicities():
    for d in range(7):
        assert oracle_dimension(FatPointSystem(d, ()), seeds=(0,)).dim == binom(d + 3, 3) - 1


def test_oracle_negative_degree():
    report = oracle_dimension(FatPointSystem(-2, (1,)))
    assert report.dim == -1 and report.stable


def test_oracle_clamps_high_multiplicity():
    # multiplicity above d + 1 cuts out the same (zero) forms as d + 1
    assert oracle_dimension(FatPointSystem(1, (3,)), seeds=(0,)).dim == -1
    assert oracle_dimension(FatPointSystem(0, (2,)), seeds=(0,)).dim == -1


def test_oracle_at_least_expected_dim():
    import random

    rng = random.Random(11)
    for _ in range(25):
        d = rng.randrange(0, 5)
        r = rng.randrange(0, 8)
        sys = FatPointSystem(d, tuple(sorted((rng.randrange(1, 4) for _ in range(r)), reverse=True)))
        report = oracle_dimension(sys, seeds=(0,))
        assert report.dim >= expected_dim(sys)
        assert -1 <= report.dim <= binom(d + 3, 3) - 1
        for t in report.trials:
            mat_rows = sum(binom(min(m, d + 1) + 2, 3) for m in sys.multiplicities)
            assert t.rank <= min(mat_rows, binom(d + 3, 3))


def test_oracle_two_primes_agree():
    for sys in (FatPointSystem(3, (2, 2, 1)), FatPointSystem(4, (2,) * 9)):
        report = oracle_dimension(sys, primes=(DEFAULT_PRIME, CHECK_PRIME), seeds=(0, 1))
        assert report.stable
        assert len(report.trials) == 4


def test_oracle_report_json():
    data = oracle_dimension(FatPointSystem(1, (1,)), seeds=(0, 1)).to_json_dict()
    assert data["dim"] == 2
    assert len(data["trials"]) == 2
    assert data["stable"] is True
