"""Independent ground truth over a large prime field.

The oracle samples r points on a smooth elliptic quartic curve (the
intersection of the fixed ruled quadric x0 x3 - x1 x2 with a random second
quadric), writes the multiplicity conditions as rows of partial-derivative
evaluations against the degree-d monomial basis, and reads the dimension of
the system off the exact rank of that matrix mod p.

Sampling walks the rulings of the fixed quadric: a point of the quadric is
(u s, u t, v s, v t), so restricting the second quadric to the line with
ruling parameter (s : t) leaves a single quadratic in (u : v) whose roots
are curve points whenever the discriminant is a square.  At most one point
is kept per ruling line in either family, so no two sample points are ever
collinear on the quadric; genericity beyond that is probabilistic with
failure chance O(poly(d, r) / p) per trial, and the two-prime / multi-seed
stability report is the guard against coincidences.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .systems import FatPointSystem, binom

DEFAULT_PRIME = 2147483647
CHECK_PRIME = 2147483629
DEFAULT_SEEDS = (0, 1, 2)

_QUADRIC_TRIES = 12


class CurveSamplingError(RuntimeError):
    """Point sampling exhausted its retry budget (bad prime/seed combination)."""


@lru_cache(maxsize=None)
def _exponents(total: int, nvars: int = 4) -> tuple[tuple[int, ...], ...]:
    """All exponent tuples of the given total degree, descending lex order."""
    if nvars == 1:
        return ((total,),)
    out = []
    for first in range(total, -1, -1):
        for rest in _exponents(total - first, nvars - 1):
            out.append((first,) + rest)
    return tuple(out)


_MONOMIALS2 = _exponents(2)
# x0 x3 - x1 x2 in the degree-2 basis
_Q1 = tuple(1 if e == (1, 0, 0, 1) else -1 if e == (0, 1, 1, 0) else 0 for e in _MONOMIALS2)


def _eval_form(coeffs, exponents, point, p: int) -> int:
    total = 0
    for c, e in zip(coeffs, exponents):
        if c == 0:
            continue
        term = c
        for x, k in zip(point, e):
            for _ in range(k):
                term = term * x % p
        total += term
    return total % p


def _gradient(coeffs, exponents, point, p: int) -> tuple[int, ...]:
    grad = [0, 0, 0, 0]
    for c, e in zip(coeffs, exponents):
        if c == 0:
            continue
        for j in range(4):
            if e[j] == 0:
                continue
            term = c * e[j]
            for i, k in enumerate(e):
                kk = k - 1 if i == j else k
                for _ in range(kk):
                    term = term * point[i] % p
            grad[j] += term
    return tuple(g % p for g in grad)


def _normalize_point(pt, p: int) -> tuple[int, ...]:
    for v in pt:
        if v % p:
            inv = pow(int(v % p), -1, p)
            return tuple(x * inv % p for x in pt)
    raise ValueError("zero vector is not a projective point")


def _is_smooth_at(q2, pt, p: int) -> bool:
    g1 = (pt[3], (-pt[2]) % p, (-pt[1]) % p, pt[0])
    g2 = _gradient(q2, _MONOMIALS2, pt, p)
    for i in range(4):
        for j in range(i + 1, 4):
            if (g1[i] * g2[j] - g1[j] * g2[i]) % p:
                return True
    return False


def _ruling_roots(q2, s: int, t: int, p: int):
    """Points of the second quadric on the ruling line of parameter (s : t).

    Restricting to the line {(u s, u t, v s, v t)} gives A u^2 + B uv + C v^2;
    each (u : v) root is returned with its point.  No roots when the
    discriminant is a non-residue; none either when the whole line lies on
    the quadric (degenerate second quadric).
    """
    from sympy.ntheory import sqrt_mod

    a = _eval_form(q2, _MONOMIALS2, (s, t, 0, 0), p)
    c = _eval_form(q2, _MONOMIALS2, (0, 0, s, t), p)
    b = (_eval_form(q2, _MONOMIALS2, (s, t, s, t), p) - a - c) % p

    if a == 0 and b == 0 and c == 0:
        return []
    uvs: list[tuple[int, int]] = []
    if a == 0:
        uvs.append((1, 0))
        if b:
            uvs.append((-c * pow(b, -1, p) % p, 1))
    else:
        disc = (b * b - 4 * a * c) % p
        root = sqrt_mod(disc, p)
        if root is None:
            return []
        inv2a = pow(2 * a % p, -1, p)
        u1 = (-b + root) * inv2a % p
        u2 = (-b - root) * inv2a % p
        uvs = [(u1, 1)] if u1 == u2 else [(u1, 1), (u2, 1)]

    out = []
    for u, v in uvs:
        pt = (u * s % p, u * t % p, v * s % p, v * t % p)
        if any(pt):
            out.append((_normalize_point((u, v), p), _normalize_point(pt, p)))
    return out


@dataclass(frozen=True)
class CurveInstance:
    """A sampled elliptic quartic with r marked points over F_p.

    The first quadric is fixed as x0 x3 - x1 x2; `quadric` holds the ten
    coefficients of the second one in the descending-lex degree-2 basis.
    Points are normalized so their first nonzero coordinate is 1.
    """

    prime: int
    quadric: tuple[int, ...]
    points: tuple[tuple[int, int, int, int], ...]
    seed: int

    @property
    def r(self) -> int:
        return len(self.points)


@lru_cache(maxsize=256)
def _make_curve(prime: int, r: int, seed: int) -> CurveInstance:
    from sympy import isprime

    if not isprime(prime):
        raise ValueError(f"{prime} is not prime")
    p = prime
    rng = random.Random(f"elliptic-quartic:{p}:{r}:{seed}")

    for _ in range(_QUADRIC_TRIES):
        q2 = tuple(rng.randrange(p) for _ in range(10))
        if _is_degenerate_quadric(q2, p):
            continue
        points: list[tuple[int, int, int, int]] = []
        seen_points: set = set()
        used_s: set = set()
        used_uv: set = set()
        draws = 0
        cap = 400 + 120 * r
        while len(points) < r and draws < cap:
            draws += 1
            z = rng.randrange(p + 1)
            s, t = (1, 0) if z == p else (z, 1)
            if (s, t) in used_s:
                continue
            cands = _ruling_roots(q2, s, t, p)
            rng.shuffle(cands)
            for uv, pt in cands:
                if uv in used_uv or pt in seen_points:
                    continue
                if not _is_smooth_at(q2, pt, p):
                    continue
                points.append(pt)
                seen_points.add(pt)
                used_s.add((s, t))
                used_uv.add(uv)
                break  # one point per ruling line
        if len(points) == r:
            curve = CurveInstance(p, q2, tuple(points), seed)
            _check_curve(curve)
            return curve
    raise CurveSamplingError(f"could not sample {r} smooth points over F_{p} (seed {seed})")


def _is_degenerate_quadric(q2, p: int) -> bool:
    if not any(v % p for v in q2):
        return True
    # proportional to the fixed quadric: only the x0x3 / x1x2 slots populated
    nz = [i for i, v in enumerate(q2) if v % p]
    if set(nz) <= {3, 5} and (q2[3] + q2[5]) % p == 0 and (q2[3] % p or q2[5] % p):
        return True
    return False


def _check_curve(curve: CurveInstance) -> None:
    p = curve.prime
    for pt in curve.points:
        if _eval_form(_Q1, _MONOMIALS2, pt, p) or _eval_form(curve.quadric, _MONOMIALS2, pt, p):
            raise CurveSamplingError(f"sampled point {pt} off the curve (internal bug)")
        if not _is_smooth_at(curve.quadric, pt, p):
            raise CurveSamplingError(f"sampled point {pt} is singular on the curve")
    if len(set(curve.points)) != len(curve.points):
        raise CurveSamplingError("sampled points collide")


def make_curve(prime: int, r: int, seed: int = 0) -> CurveInstance:
    """Deterministic in (prime, r, seed); results are cached."""
    if r < 0:
        raise ValueError("r must be non-negative")
    return _make_curve(int(prime), int(r), int(seed))


@dataclass(eq=False)
class ConditionMatrix:
    """Multiplicity conditions mod p in the degree-d monomial basis.

    One row block per point: for multiplicity m, a row for every order-(m-1)
    partial derivative (binom(m+2, 3) rows), evaluated on each of the
    binom(d+3, 3) degree-d monomials in descending-lex order.
    """

    prime: int
    degree: int
    multiplicities: tuple[int, ...]
    entries: np.ndarray

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


def condition_matrix(d: int, curve: CurveInstance, mults) -> ConditionMatrix:
    """Build the interpolation matrix for multiplicities aligned with the points.

    Requires p > d so the falling factorials of the top-order partials never
    vanish mod p, and m_i <= d + 1: only the top-order partials are imposed,
    and their vanishing pins all lower orders through the Euler identity
    exactly when the differentiated forms keep positive degree.  (Callers
    wanting m > d + 1 clamp to d + 1 first; the conditions coincide.)
    """
    p = curve.prime
    if d < 0:
        raise ValueError("degree must be non-negative")
    if p <= d:
        raise ValueError(f"prime {p} must exceed the degree {d}")
    mults = tuple(int(m) for m in mults)
    if len(mults) != curve.r:
        raise ValueError(f"{len(mults)} multiplicities for {curve.r} points")
    if any(m > d + 1 for m in mults):
        raise ValueError("multiplicity above d + 1; clamp first (conditions coincide)")

    col_exp = np.array(_exponents(d), dtype=np.int64)  # (C, 4)
    ncols = col_exp.shape[0]
    max_m = max(mults, default=0)

    # falling factorials ff[n, k] = n (n-1) ... (n-k+1) mod p
    ff = np.zeros((d + 1, max(max_m, 1)), dtype=np.int64)
    ff[:, 0] = 1
    for k in range(1, max(max_m, 1)):
        for n in range(d + 1):
            ff[n, k] = ff[n, k - 1] * max(n - k + 1, 0) % p

    blocks = []
    for pt, m in zip(curve.points, mults):
        if m <= 0:
            continue
        pw = np.array(
            [[pow(int(x), k, p) for k in range(d + 1)] for x in pt], dtype=np.int64
        )  # (4, d+1)
        for alpha in _exponents(m - 1):
            valid = np.all(col_exp >= np.array(alpha), axis=1)
            row = np.ones(ncols, dtype=np.int64)
            for j in range(4):
                bj = col_exp[:, j]
                shift = np.maximum(bj - alpha[j], 0)
                row = row * ff[bj, alpha[j]] % p
                row = row * pw[j, shift] % p
            row = np.where(valid, row, 0)
            blocks.append(row)

    expected_rows = sum(binom(m + 2, 3) for m in mults)
    entries = (
        np.array(blocks, dtype=np.int64)
        if blocks
        else np.zeros((0, ncols), dtype=np.int64)
    )
    assert entries.shape == (expected_rows, ncols), "row count drifted from binom(m+2, 3) blocks"
    return ConditionMatrix(p, d, mults, entries)


def rank_mod_p(mat: ConditionMatrix) -> int:
    """Exact rank over F_p by Gaussian elimination; the input stays unmodified."""
    return _rank(mat.entries, mat.prime)


def _rank(entries: np.ndarray, p: int) -> int:
    # int64 is safe: (p-1)^2 < 2^63 for p < 3.03e9
    a = np.array(entries, dtype=np.int64) % p
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivots = np.nonzero(a[rank:, col])[0]
        if pivots.size == 0:
            continue
        i = rank + int(pivots[0])
        if i != rank:
            a[[rank, i]] = a[[i, rank]]
        inv = pow(int(a[rank, col]), -1, p)
        a[rank] = a[rank] * inv % p
        below = np.nonzero(a[rank + 1 :, col])[0]
        if below.size:
            idx = below + rank + 1
            a[idx] = (a[idx] - a[idx, col][:, None] * a[rank][None, :]) % p
        rank += 1
    return rank


@dataclass(frozen=True)
class OracleTrial:
    prime: int
    seed: int
    rank: int
    dim: int

    def to_json_dict(self) -> dict:
        return {"prime": self.prime, "seed": self.seed, "rank": self.rank, "dim": self.dim}


@dataclass(frozen=True)
class OracleReport:
    dim: int
    trials: tuple[OracleTrial, ...]
    stable: bool

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "trials": [t.to_json_dict() for t in self.trials],
            "stable": self.stable,
        }


def oracle_dimension(
    sys: FatPointSystem,
    primes=(DEFAULT_PRIME,),
    seeds=DEFAULT_SEEDS,
) -> OracleReport:
    """Measured dimension: binom(d+3, 3) - 1 - rank, minimized over trials.

    Random configurations can only exceed the generic dimension
    (semicontinuity), so the minimum is the best generic estimate; trials
    that disagree flag the report as unstable rather than being averaged.
    """
    sys = sys.normalize()
    d = sys.degree
    if d < 0:
        return OracleReport(-1, (), True)
    if not seeds or not primes:
        raise ValueError("need at least one prime and one seed")
    # multiplicity > d + 1 imposes the same conditions as d + 1 (only the
    # zero form vanishes to order above its degree)
    mults = tuple(min(m, d + 1) for m in sys.multiplicities)
    ncols = binom(d + 3, 3)

    trials = []
    for prime in primes:
        if prime <= d:
            raise ValueError(f"prime {prime} must exceed the degree {d}")
        for seed in seeds:
            curve = make_curve(prime, len(mults), seed)
            mat = condition_matrix(d, curve, mults)
            rank = rank_mod_p(mat)
            trials.append(OracleTrial(prime, seed, rank, ncols - 1 - rank))
    dim = min(t.dim for t in trials)
    stable = all(t.dim == dim for t in trials)
    return OracleReport(dim, tuple(trials), stable)
