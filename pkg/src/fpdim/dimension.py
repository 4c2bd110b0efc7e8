"""Top-level driver: normalize, reduce, classify, apply the matching formula.

The driver recurses through truncation and cone subtraction, re-running the
reduction after each hop, and returns the exact projective dimension with a
full trace.  Speciality is reported against the expected dimension of the
ORIGINAL input (the quadruple transformation changes virtual dimensions, and
callers ask about what they typed).
"""

from __future__ import annotations

from dataclasses import dataclass

from .classify import (
    CaseOne,
    CaseThree,
    CaseTwo,
    Classification,
    Cone,
    InvariantViolation,
    Truncate,
    case_label,
    classification_to_json,
    classify,
)
from .reduction import ReductionTrace, reduce_to_standard
from .systems import (
    FatPointSystem,
    _raw_virtual_dim,
    binom,
    line_defects,
    virtual_dim,
)


def dim_case_one(sys: FatPointSystem) -> int:
    """dim = v + sum_i binom(t_i + 1, 3) for standard systems of curve degree >= 1."""
    value = virtual_dim(sys) + sum(binom(t + 1, 3) for t in line_defects(sys))
    if value < 0:
        raise InvariantViolation(f"positive-curve-degree formula went negative on {sys}: {value}")
    return value


def dim_case_two(m: int) -> int:
    """dim of (2m; m^r) with r >= 8 is exactly m."""
    if m < 1:
        raise ValueError(f"dim_case_two needs a positive m, got {m}")
    return m


def dim_case_three(sys: FatPointSystem, cls: CaseThree) -> int:
    """dim = v + sum binom(t_i+1, 3) + (r-8) binom(t+1, 3) + n binom(t+1, 2)."""
    r = sys.r
    value = (
        virtual_dim(sys)
        + sum(binom(t + 1, 3) for t in cls.defects)
        + (r - 8) * binom(cls.t + 1, 3)
        + cls.n * binom(cls.t + 1, 2)
    )
    if value < 0:
        raise InvariantViolation(f"curve-defect formula went negative on {sys}: {value}")
    return value


@dataclass(frozen=True)
class DriverHop:
    """One pass of the driver loop on a (possibly residual) system."""

    system: FatPointSystem
    label: str
    reduction: ReductionTrace | None = None
    classification: Classification | None = None

    def to_json_dict(self) -> dict:
        out: dict = {"system": self.system.to_json_dict(), "label": self.label}
        if self.reduction is not None:
            out["reduction"] = self.reduction.to_json_list()
        if self.classification is not None:
            out["classification"] = classification_to_json(self.classification)
        return out


@dataclass(frozen=True)
class DimensionResult:
    system: FatPointSystem
    dim: int
    vdim: int
    edim: int
    speciality: int
    case_path: tuple[str, ...]
    hops: tuple[DriverHop, ...]

    def to_json_dict(self, include_trace: bool = False) -> dict:
        out = {
            "d": self.system.degree,
            "m": list(self.system.multiplicities),
            "dim": self.dim,
            "vdim": self.vdim,
            "edim": self.edim,
            "speciality": self.speciality,
            "case_path": list(self.case_path),
        }
        if include_trace:
            out["trace"] = [h.to_json_dict() for h in self.hops]
        return out


def dimension(system: FatPointSystem) -> DimensionResult:
    """Exact projective dimension of the system (-1 for empty)."""
    orig = system.normalize()
    vdim = _raw_virtual_dim(orig)
    edim = max(-1, vdim)

    hops: list[DriverHop] = []
    path: list[str] = []
    cur = orig
    after_truncate: Truncate | None = None
    passes = 0
    # each cone hop drops the degree by 3 and may be followed by one truncation
    cap = 2 * (max(orig.degree, 0) // 3) + 8

    while True:
        passes += 1
        if passes > cap:
            raise InvariantViolation(f"driver pass cap {cap} exceeded on {orig}")
        cur = cur.normalize()

        if cur.degree < 0:
            hops.append(DriverHop(cur, "empty"))
            path.append("empty")
            dim = -1
            break
        if cur.r == 0:
            hops.append(DriverHop(cur, "base"))
            path.append("base")
            dim = binom(cur.degree + 3, 3) - 1
            break

        reduced, trace = reduce_to_standard(cur)
        if trace.empty:
            hops.append(DriverHop(cur, "empty", trace))
            path.append("empty")
            dim = -1
            break
        if reduced.r == 0:
            hops.append(DriverHop(cur, "base", trace))
            path.append("base")
            dim = binom(reduced.degree + 3, 3) - 1
            break

        cls = classify(reduced)
        label = case_label(cls)
        hops.append(DriverHop(cur, label, trace, cls))
        path.append(label)

        if after_truncate is not None and not isinstance(cls, CaseThree):
            raise InvariantViolation(
                f"truncation of {after_truncate.replacement} re-classified as {label}"
            )

        if isinstance(cls, CaseOne):
            dim = dim_case_one(reduced)
            break
        if isinstance(cls, CaseTwo):
            dim = dim_case_two(cls.m)
            break
        if isinstance(cls, CaseThree):
            if after_truncate is not None and cls.t != after_truncate.t:
                raise InvariantViolation(
                    f"truncation changed t from {after_truncate.t} to {cls.t}"
                )
            dim = dim_case_three(reduced, cls)
            break
        if isinstance(cls, Truncate):
            if after_truncate is not None:
                raise InvariantViolation(f"repeated truncation on {reduced}")
            after_truncate = cls
            cur = cls.replacement
            continue
        # cone: subtract the cubic cone through all the points and restart
        after_truncate = None
        cur = cls.residual
        continue

    return DimensionResult(
        system=orig,
        dim=dim,
        vdim=vdim,
        edim=edim,
        speciality=dim - edim,
        case_path=tuple(path),
        hops=tuple(hops),
    )
