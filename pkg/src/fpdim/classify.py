"""Case analysis for reduced systems: which dimension formula applies.

A reduced standard system falls into exactly one bucket, keyed off the sign
of its intersection with the quartic curve:

  * case one   -- curve degree >= 1, no curve multiplicity forced (t = 0);
  * case two   -- the pattern (2m; m^8, tail), r >= 8;
  * case three -- curve degree <= 0, tail index b = r, and d >= m_1 + t;
  * truncate   -- b < r: raise the tail multiplicities to t and retry;
  * cone       -- d < m_1 + t: subtract the cubic cone through all points.
"""

from __future__ import annotations

from dataclasses import dataclass

from .systems import (
    DefectVector,
    FatPointSystem,
    anticanonical_degree,
    line_defects,
)


class InvariantViolation(RuntimeError):
    """Data broke an invariant the case analysis guarantees for valid inputs."""


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class CaseOne:
    defects: DefectVector


@dataclass(frozen=True)
class CaseTwo:
    m: int


@dataclass(frozen=True)
class CaseThree:
    defects: DefectVector
    t: int
    b: int
    n: int
    u: int


@dataclass(frozen=True)
class Cone:
    residual: FatPointSystem


@dataclass(frozen=True)
class Truncate:
    replacement: FatPointSystem
    t: int


Classification = Empty | CaseOne | CaseTwo | CaseThree | Cone | Truncate

_LABELS = {
    Empty: "empty",
    CaseOne: "one",
    CaseTwo: "two",
    CaseThree: "three",
    Cone: "cone",
    Truncate: "truncate",
}


def case_label(cls: Classification) -> str:
    return _LABELS[type(cls)]


def classification_to_json(cls: Classification) -> dict:
    out: dict = {"case": case_label(cls)}
    if isinstance(cls, CaseOne):
        out["defects"] = cls.defects.to_json_list()
    elif isinstance(cls, CaseTwo):
        out["m"] = cls.m
    elif isinstance(cls, CaseThree):
        out.update(
            defects=cls.defects.to_json_list(), t=cls.t, b=cls.b, n=cls.n, u=cls.u
        )
    elif isinstance(cls, Cone):
        out["residual"] = cls.residual.to_json_dict()
    elif isinstance(cls, Truncate):
        out["replacement"] = cls.replacement.to_json_dict()
        out["t"] = cls.t
    return out


def is_case_two(sys: FatPointSystem) -> int | None:
    """Return m when the system matches (2m; m^8, m_9, ..., m_r), else None."""
    d = sys.degree
    m = sys.multiplicities
    if len(m) < 8 or d % 2 != 0:
        return None
    half = d // 2
    if half >= 1 and all(v == half for v in m[:8]):
        return half
    return None


def compute_b(sys: FatPointSystem) -> int | None:
    """Largest i in [9, r] with 4d - (m_1 + ... + m_i) + m_i (i - 8) >= 1.

    The score is non-increasing in i, so this is the last index at which the
    residual curve subtractions stay effective.  None when no index works
    (callers surface that as an invariant violation: for valid standard
    inputs b is always defined).
    """
    d = sys.degree
    m = sys.multiplicities
    r = len(m)
    best = None
    prefix = sum(m[:8])
    for i in range(9, r + 1):
        prefix += m[i - 1]
        if 4 * d - prefix + m[i - 1] * (i - 8) >= 1:
            best = i
    return best


def compute_t(sys: FatPointSystem, b: int) -> int:
    """Forced multiplicity of the quartic curve in the base locus.

    t = ceil((m_1 + ... + m_b - 4d + 1) / (b - 8)); when b = r this equals
    ceil((u + 1) / (r - 8)) with u the negated curve degree.
    """
    if b < 9:
        raise ValueError(f"compute_t needs b >= 9, got {b}")
    num = sum(sys.multiplicities[:b]) - 4 * sys.degree + 1
    den = b - 8
    return -(-num // den)


def classify(sys: FatPointSystem) -> Classification:
    """Decide the case of a reduced standard system (zeros dropped).

    Exactly one variant is returned for every valid input; violations of the
    internal windows (n in [0, r-9], t in [1, m_r], the truncation bracket
    m_{b+1} < t <= m_b) raise InvariantViolation instead of mis-stating a
    case.
    """
    if not sys.is_reduced():
        raise ValueError(f"classify expects a reduced standard system, got {sys}")
    d = sys.degree
    m = sys.multiplicities
    r = len(m)
    cl = anticanonical_degree(sys)

    if r == 0 or cl >= 1:
        return CaseOne(line_defects(sys))

    if r <= 7:
        raise InvariantViolation(
            f"non-positive curve degree on a standard system with r = {r} <= 7: {sys}"
        )

    m2 = is_case_two(sys)
    if m2 is not None:
        return CaseTwo(m2)

    b = compute_b(sys)
    if b is None:
        raise InvariantViolation(f"no admissible index b in [9, {r}] for {sys}")
    t = compute_t(sys, b)

    if (t <= m[-1]) != (b == r):
        raise InvariantViolation(f"t <= m_r must hold exactly when b = r; {sys} gives t={t}, b={b}")

    if b < r:
        if not (m[b] < t <= m[b - 1]):
            raise InvariantViolation(
                f"truncation bracket m_{b + 1} < t <= m_{b} failed on {sys}: t={t}"
            )
        replacement = FatPointSystem(d, m[:b] + (t,) * (r - b))
        return Truncate(replacement, t)

    u = -cl
    if d >= m[0] + t:
        n = u - (t - 1) * (r - 8)
        if not 0 <= n <= r - 9:
            raise InvariantViolation(f"n = {n} outside [0, {r - 9}] on {sys}")
        if not 1 <= t <= m[-1]:
            raise InvariantViolation(f"t = {t} outside [1, m_r = {m[-1]}] on {sys}")
        return CaseThree(line_defects(sys), t, b, n, u)

    defects = line_defects(sys)
    if r < 10:
        raise InvariantViolation(f"cone branch needs r >= 10, got r = {r} on {sys}")
    if defects[r - 1] <= 0:
        raise InvariantViolation(f"cone branch needs a positive last-line defect on {sys}")
    if m[0] < 3:
        raise InvariantViolation(f"cone residual would be negative on {sys}")
    residual = FatPointSystem(d - 3, (m[0] - 3,) + tuple(v - 1 for v in m[1:]))
    return Cone(residual)
