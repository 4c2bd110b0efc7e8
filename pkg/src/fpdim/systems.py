"""Core datum and closed-form invariants of fat-point surface systems.

A system (d; m_1, ..., m_r) collects the degree-d surfaces of projective
3-space passing with multiplicity at least m_i through the i-th of r general
points chosen on a smooth elliptic quartic curve.  Everything here is exact
integer arithmetic; the geometric content lives in the reduction,
classification and dimension modules.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

_MULT_TOKEN = re.compile(r"^(-?\d+)(?:x(\d+))?$")


def binom(n: int, k: int) -> int:
    """Binomial coefficient with the total convention: 0 whenever n < k or n < 0.

    The zero convention makes correction terms like binom(t+1, 3) vanish
    automatically for t <= 1, which the dimension formulas rely on.
    """
    if k < 0 or n < 0 or n < k:
        return 0
    return math.comb(n, k)


def parse_multiplicities(text: str) -> tuple[int, ...]:
    """Parse the comma shorthand with repetition factors, e.g. "5,1x19".

    "5,1x19" means one point of multiplicity 5 followed by 19 points of
    multiplicity 1.  Whitespace around tokens is ignored.
    """
    text = text.strip()
    if not text:
        return ()
    out: list[int] = []
    for raw in text.split(","):
        tok = raw.replace(" ", "")
        m = _MULT_TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad multiplicity token {raw!r} (expected INT or INTxCOUNT)")
        value = int(m.group(1))
        count = int(m.group(2)) if m.group(2) else 1
        out.extend([value] * count)
    return tuple(out)


def format_multiplicities(mults) -> str:
    """Run-length compressed inverse of :func:`parse_multiplicities`."""
    parts: list[str] = []
    i = 0
    mults = tuple(mults)
    while i < len(mults):
        j = i
        while j < len(mults) and mults[j] == mults[i]:
            j += 1
        parts.append(f"{mults[i]}x{j - i}" if j - i > 1 else str(mults[i]))
        i = j
    return ",".join(parts)


@dataclass(frozen=True)
class FatPointSystem:
    """The input datum (d; m_1, ..., m_r).

    The degree may be negative only transiently inside the reduction loop;
    a normalized system has multiplicities sorted non-increasing, strictly
    positive, with r equal to the sequence length.  The empty multiplicity
    list (r = 0) is legal and serves as a recursion base.
    """

    degree: int
    multiplicities: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "multiplicities", tuple(int(m) for m in self.multiplicities))

    @property
    def r(self) -> int:
        return len(self.multiplicities)

    def normalize(self) -> "FatPointSystem":
        """Sort multiplicities non-increasing and drop non-positive entries."""
        kept = tuple(sorted((m for m in self.multiplicities if m > 0), reverse=True))
        if kept == self.multiplicities:
            return self
        return FatPointSystem(self.degree, kept)

    def is_normalized(self) -> bool:
        m = self.multiplicities
        return all(m[i] >= m[i + 1] for i in range(len(m) - 1)) and (not m or m[-1] >= 1)

    def is_standard(self) -> bool:
        """Sorted, non-negative multiplicities with 2d >= m_1 + m_2 + m_3 + m_4."""
        m = self.multiplicities
        if any(m[i] < m[i + 1] for i in range(len(m) - 1)):
            return False
        if m and m[-1] < 0:
            return False
        return 2 * self.degree >= sum(m[:4])

    def is_reduced(self) -> bool:
        """Standard, d >= m_1, strictly positive multiplicities, d >= 0.

        This is the state reached by a successful Cremona reduction.
        """
        if self.degree < 0 or not self.is_standard() or not self.is_normalized():
            return False
        return self.r == 0 or self.degree >= self.multiplicities[0]

    def to_json_dict(self) -> dict:
        return {"d": self.degree, "m": list(self.multiplicities)}

    @classmethod
    def from_json_dict(cls, data: dict) -> "FatPointSystem":
        return cls(int(data["d"]), tuple(int(v) for v in data["m"]))

    @classmethod
    def parse(cls, degree: int, mult_text: str) -> "FatPointSystem":
        return cls(degree, parse_multiplicities(mult_text))

    def __str__(self) -> str:
        return f"({self.degree}; {format_multiplicities(self.multiplicities)})"


@dataclass(frozen=True)
class DefectVector:
    """Per-line defects (t_1, ..., t_r).

    Convention: t_1 belongs to the line through the 2nd and 3rd points, t_i
    (i >= 2) to the line through the 1st and i-th points.  Each entry equals
    its defining max-formula exactly and is recomputable from the system.
    """

    entries: tuple[int, ...] = ()

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def to_json_list(self) -> list[int]:
        return list(self.entries)


def _raw_virtual_dim(sys: FatPointSystem) -> int:
    # total-binomial variant, meaningful for any degree (negative included)
    return binom(sys.degree + 3, 3) - sum(binom(m + 2, 3) for m in sys.multiplicities) - 1


def virtual_dim(sys: FatPointSystem) -> int:
    """v = binom(d+3, 3) - sum_i binom(m_i+2, 3) - 1, the naive conditions count."""
    if sys.degree < 0:
        raise ValueError(f"virtual_dim needs a non-negative degree, got {sys.degree}")
    return _raw_virtual_dim(sys)


def expected_dim(sys: FatPointSystem) -> int:
    """edim = max(-1, v)."""
    if sys.degree < 0:
        return -1
    return max(-1, virtual_dim(sys))


def anticanonical_degree(sys: FatPointSystem) -> int:
    """4d - sum_i m_i: the intersection of the system with the quartic curve.

    Its sign drives the whole case split downstream.
    """
    return 4 * sys.degree - sum(sys.multiplicities)


def line_defects(sys: FatPointSystem) -> DefectVector:
    """Forced multiplicities of the connecting lines in the base locus.

    t_1 = max(0, m_2 + m_3 - d) (0 when r < 3) and
    t_i = max(0, m_1 + m_i - d) for 2 <= i <= r.
    """
    d = sys.degree
    m = sys.multiplicities
    r = len(m)
    if r == 0:
        return DefectVector(())
    t1 = max(0, m[1] + m[2] - d) if r >= 3 else 0
    rest = tuple(max(0, m[0] + m[i] - d) for i in range(1, r))
    return DefectVector((t1,) + rest)
