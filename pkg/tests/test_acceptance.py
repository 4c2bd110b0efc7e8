"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.  Every
tolerance here is exact (integer equality); the master sweep covers the
full grid d <= 5, r <= 10, m_i in {1, 2, 3} with three seeds.
"""

import random

import pytest

from fpdim.chow import (
    AmbientSpace,
    DivisorClass,
    chi_curve_blowup,
    chi_identity_case1,
    chi_identity_case3,
    euler_characteristic,
    linear_system_class,
    triple_product,
)
from fpdim.classify import CaseOne, CaseThree, classify
from fpdim.dimension import dimension
from fpdim.oracle import CHECK_PRIME, DEFAULT_PRIME, oracle_dimension
from fpdim.reduction import cremona_quadruple, reduce_to_standard
from fpdim.systems import FatPointSystem, binom
from fpdim.verify import enumerate_grid, run_verification

GRID = (5, 10, 3)  # d_max, r_max, m_max
SEEDS = (0, 1, 2)


def _criterion(num: int, ok: bool, detail: str):
    print(f"\n[acceptance] criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num} failed: {detail}"


@pytest.fixture(scope="module")
def grid():
    return list(enumerate_grid(*GRID))


def test_criterion_1_master_agreement_sweep(grid):
    failures = []
    unstable = 0
    for d, m in grid:
        rec = run_verification(FatPointSystem(d, m), primes=(DEFAULT_PRIME,), seeds=SEEDS)
        if rec.error is not None or not rec.match:
            failures.append((d, m, rec.formula_dim, rec.oracle_dim, rec.error))
        if rec.error is None and not rec.stable:
            unstable += 1
    _criterion(
        1,
        not failures and unstable == 0,
        f"formula == oracle on {len(grid)}/{len(grid)} grid instances, 3 seeds, "
        f"prime {DEFAULT_PRIME}"
        + (f"; failures: {failures[:5]}" if failures else ""),
    )


def test_criterion_2_double_degree_theorem():
    bad = []
    for m in (1, 2, 3):
        for r in range(8, 13):
            sys = FatPointSystem(2 * m, (m,) * r)
            f = dimension(sys).dim
            o = oracle_dimension(sys, seeds=SEEDS).dim
            if not (f == o == m):
                bad.append((m, r, f, o))
    res = dimension(FatPointSystem(4, (2,) * 10))
    speciality_ok = res.speciality == 3 and res.edim == -1 and res.dim == 2
    _criterion(
        2,
        not bad and speciality_ok,
        "dim (2m; m^r) = m for m in 1..3, r in 8..12 (formula and oracle); "
        f"(4; 2^10) has speciality {res.speciality}"
        + (f"; failures: {bad}" if bad else ""),
    )


def test_criterion_3_hand_verified_anchors():
    anchors = [
        (FatPointSystem(3, (1,) * 13), 7),
        (FatPointSystem(5, (5,) + (1,) * 19), 5),
        (FatPointSystem(3, (2, 2, 2, 2, 1)), 2),
        (FatPointSystem(5, (4, 4, 4, 4)), -1),
    ]
    bad = []
    paths = {}
    for sys, want in anchors:
        res = dimension(sys)
        o = oracle_dimension(sys, seeds=SEEDS).dim
        paths[str(sys)] = res.case_path
        if not (res.dim == o == want):
            bad.append((str(sys), res.dim, o, want))
    branch_ok = (
        "cone" in paths["(5; 5,1x19)"]
        and any(s.kind == "cremona" for s in reduce_to_standard(FatPointSystem(3, (2, 2, 2, 2, 1)))[1].steps)
    )
    _criterion(
        3,
        not bad and branch_ok,
        "anchors exact: (3;1^13)=7, (5;5,1^19)=5 via cone, (3;2^4,1)=2 via "
        "the quadruple transformation, (5;4^4)=-1" + (f"; failures: {bad}" if bad else ""),
    )


def test_criterion_4_riemann_roch_identity():
    rng = random.Random("criterion-4")
    bad = 0
    for _ in range(500):
        d = rng.randint(0, 20)
        r = rng.randint(0, 15)
        m = tuple(rng.randint(0, 10) for _ in range(r))
        chi = euler_characteristic(linear_system_class(AmbientSpace(r), d, m))
        if chi != binom(d + 3, 3) - sum(binom(mi + 2, 3) for mi in m):
            bad += 1
    _criterion(4, bad == 0, f"chi_X equals the conditions count on 500 random classes ({bad} failures)")


def test_criterion_5_case_one_chi_identity():
    rng = random.Random("criterion-5")
    checked = 0
    bad = 0
    while checked < 500:
        d = rng.randint(1, 18)
        r = rng.randint(0, 12)
        m = tuple(sorted((rng.randint(1, d) for _ in range(r)), reverse=True))
        reduced, trace = reduce_to_standard(FatPointSystem(d, m))
        if trace.empty or reduced.r == 0:
            continue
        if not isinstance(classify(reduced), CaseOne):
            continue
        lhs, rhs = chi_identity_case1(reduced)
        if lhs != rhs:
            bad += 1
        checked += 1
    lhs, rhs = chi_identity_case1(FatPointSystem(2, (2, 2)))
    worked_ok = lhs == rhs == 3
    _criterion(
        5,
        bad == 0 and worked_ok,
        f"case-one chi identity exact on 500 random systems ({bad} failures); "
        f"worked instance (2;2,2) gives chi_Y = {lhs} on both sides",
    )


def test_criterion_6_case_three_chi_chain(grid):
    case_threes = []
    for d, m in grid:
        reduced, trace = reduce_to_standard(FatPointSystem(d, m))
        if trace.empty or reduced.r == 0:
            continue
        cls = classify(reduced)
        if isinstance(cls, CaseThree):
            case_threes.append((reduced, cls))
    bad_chain = [s for s, c in case_threes if chi_identity_case3(s, c)[0] != chi_identity_case3(s, c)[1]]
    bad_dim = [
        s for s, c in case_threes if dimension(s).dim + 1 != chi_curve_blowup(s, c)
    ]
    t_values = sorted({c.t for _, c in case_threes})
    _criterion(
        6,
        bool(case_threes) and not bad_chain and not bad_dim,
        f"chi chain with y = -n and dim + 1 = chi_curve_blowup exact on "
        f"{len(case_threes)} in-grid curve-defect systems (t values {t_values})"
        + (f"; chain failures: {[str(s) for s in bad_chain[:3]]}" if bad_chain else "")
        + (f"; dim failures: {[str(s) for s in bad_dim[:3]]}" if bad_dim else ""),
    )


def _random_divisor(rng, amb):
    return DivisorClass(
        amb,
        rng.randint(-8, 8),
        tuple(rng.randint(-8, 8) for _ in range(amb.r)),
        tuple(rng.randint(-8, 8) for _ in range(amb.a)),
        rng.randint(-8, 8) if amb.curve_blown else 0,
    )


def test_criterion_7_property_suites(grid):
    problems = []

    # quadruple-transformation involution on 1000 no-clamp instances
    rng = random.Random("criterion-7a")
    done = 0
    while done < 1000:
        d = rng.randint(0, 25)
        m = tuple(sorted((rng.randint(0, 9) for _ in range(rng.randint(4, 10))), reverse=True))
        k = 2 * d - sum(m[:4])
        if any(v + k < 0 for v in m[:4]):
            continue
        sys = FatPointSystem(d, m)
        if cremona_quadruple(cremona_quadruple(sys)) != sys:
            problems.append(f"involution on {sys}")
        done += 1

    # monotonicity of the formula dimension across the grid
    for d, m in grid:
        base = dimension(FatPointSystem(d, m)).dim
        if dimension(FatPointSystem(d + 1, m)).dim < base:
            problems.append(f"degree monotonicity at ({d}; {m})")
        for i in range(len(m)):
            bumped = list(m)
            bumped[i] += 1
            if dimension(FatPointSystem(d, tuple(bumped))).dim > base:
                problems.append(f"multiplicity monotonicity at ({d}; {m}) slot {i}")
                break

    # classification windows on every in-grid curve-defect system
    for d, m in grid:
        reduced, trace = reduce_to_standard(FatPointSystem(d, m))
        if trace.empty or reduced.r == 0:
            continue
        cls = classify(reduced)
        if isinstance(cls, CaseThree):
            if not (0 <= cls.n <= reduced.r - 9):
                problems.append(f"n window on {reduced}")
            if not (1 <= cls.t <= reduced.multiplicities[-1]):
                problems.append(f"t window on {reduced}")

    # trilinear form: symmetry and linearity, 500 triples per ambient
    ambients = [
        AmbientSpace(4),
        AmbientSpace(8, frozenset({1, 2, 3})),
        AmbientSpace(10, frozenset({2, 3, 7}), curve_blown=True),
        AmbientSpace(13, frozenset(), curve_blown=True),
    ]
    rng = random.Random("criterion-7b")
    for amb in ambients:
        for _ in range(500):
            a, b, c, a2 = (_random_divisor(rng, amb) for _ in range(4))
            base = triple_product(a, b, c)
            if base != triple_product(b, c, a) or base != triple_product(c, b, a):
                problems.append(f"symmetry on {amb}")
                break
            if triple_product(a + a2, b, c) != base + triple_product(a2, b, c):
                problems.append(f"additivity on {amb}")
                break
            lam = rng.randint(-5, 5)
            if triple_product(lam * a, b, c) != lam * base:
                problems.append(f"scaling on {amb}")
                break

    # 12-divisibility of the Riemann-Roch bracket (raises on failure)
    rng = random.Random("criterion-7c")
    for amb in ambients:
        for _ in range(250):
            euler_characteristic(_random_divisor(rng, amb))

    _criterion(
        7,
        not problems,
        "involution x1000, grid monotonicity, n/t windows, trilinearity x500 "
        "per ambient, bracket divisibility" + (f"; problems: {problems[:5]}" if problems else ""),
    )


def test_criterion_8_oracle_self_consistency(grid):
    rng = random.Random("criterion-8")
    sample = [grid[i] for i in sorted(rng.sample(range(len(grid)), 100))]
    unstable = []
    for d, m in sample:
        report = oracle_dimension(
            FatPointSystem(d, m), primes=(DEFAULT_PRIME, CHECK_PRIME), seeds=SEEDS
        )
        if not report.stable:
            unstable.append((d, m))
    _criterion(
        8,
        not unstable,
        f"two primes x three seeds agree on 100 random grid instances "
        f"({len(unstable)} instability flags)",
    )
