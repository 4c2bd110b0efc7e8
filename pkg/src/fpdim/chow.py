"""Symbolic intersection calculator for the blown-up threefolds.

Three ambients appear: the blow-up X of projective 3-space at r points of
the quartic curve, the further blow-up Y_I along the connecting lines
indexed by I (line 1 joins points 2 and 3; line i >= 2 joins points 1 and
i), and the blow-up Y~_I of the curve itself.  Divisor classes are written
in the basis H, E_1..E_r, F_i (i in I), F.

The trilinear intersection form is evaluated from the table of
non-vanishing products:

    H^3 = E_i^3 = 1
    F_i^3 = 2                     (i in I)
    (H | E_2 | E_3) F_1^2 = -1
    (H | E_1 | E_i) F_i^2 = -1    (i >= 2)
    H F^2 = -4,   E_i F^2 = -1,   F^3 = 2 (r - 8)

Every monomial not listed evaluates to 0.  The Chern classes are hard-coded
from the specialization to these ambients (including the epsilon correction
when line 1 is blown up) rather than re-derived from the general blow-up
formula, so they are directly testable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classify import CaseThree, InvariantViolation
from .systems import FatPointSystem, binom, line_defects


class AmbientMismatch(ValueError):
    """Operands live on different blow-ups."""


@dataclass(frozen=True)
class AmbientSpace:
    """Combinatorial descriptor: r points, blown-up line set I, curve flag."""

    r: int
    lines: frozenset[int] = frozenset()
    curve_blown: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lines", frozenset(self.lines))
        if self.r < 0:
            raise ValueError("r must be non-negative")
        for i in self.lines:
            if i == 1:
                if self.r < 3:
                    raise ValueError("line 1 joins points 2 and 3, needs r >= 3")
            elif not 2 <= i <= self.r:
                raise ValueError(f"line index {i} outside 2..{self.r}")

    @property
    def a(self) -> int:
        return len(self.lines)

    @property
    def eps(self) -> int:
        return 1 if 1 in self.lines else 0

    @property
    def line_order(self) -> tuple[int, ...]:
        return tuple(sorted(self.lines))


@dataclass(frozen=True)
class DivisorClass:
    """D = h H + sum e_i E_i + sum f_i F_i + curve F on the given ambient.

    f is aligned with ambient.line_order; curve must be 0 unless the curve
    is blown up.
    """

    ambient: AmbientSpace
    h: int = 0
    e: tuple[int, ...] = ()
    f: tuple[int, ...] = ()
    curve: int = 0

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(self.e))
        object.__setattr__(self, "f", tuple(self.f))
        if len(self.e) != self.ambient.r:
            raise ValueError(f"expected {self.ambient.r} point coefficients, got {len(self.e)}")
        if len(self.f) != self.ambient.a:
            raise ValueError(f"expected {self.ambient.a} line coefficients, got {len(self.f)}")
        if self.curve and not self.ambient.curve_blown:
            raise ValueError("curve coefficient on an ambient without the curve blown up")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        _same_ambient(self, other)
        return DivisorClass(
            self.ambient,
            self.h + other.h,
            tuple(a + b for a, b in zip(self.e, other.e)),
            tuple(a + b for a, b in zip(self.f, other.f)),
            self.curve + other.curve,
        )

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(
            self.ambient, -self.h, tuple(-v for v in self.e), tuple(-v for v in self.f), -self.curve
        )

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __rmul__(self, scalar: int) -> "DivisorClass":
        return DivisorClass(
            self.ambient,
            scalar * self.h,
            tuple(scalar * v for v in self.e),
            tuple(scalar * v for v in self.f),
            scalar * self.curve,
        )


@dataclass(frozen=True)
class TwoCycle:
    """Codimension-2 class over the basis {H^2, E_i^2, HF, E_iF}."""

    ambient: AmbientSpace
    h2: int = 0
    e2: tuple[int, ...] = ()
    hf: int = 0
    ef: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "e2", tuple(self.e2))
        ef = tuple(self.ef) if self.ef else (0,) * self.ambient.r
        object.__setattr__(self, "ef", ef)
        if len(self.e2) != self.ambient.r or len(self.ef) != self.ambient.r:
            raise ValueError("coefficient length does not match ambient")


def _same_ambient(*objs) -> AmbientSpace:
    amb = objs[0].ambient
    for o in objs[1:]:
        if o.ambient != amb:
            raise AmbientMismatch(f"{o.ambient} differs from {amb}")
    return amb


def linear_system_class(
    amb: AmbientSpace,
    d: int,
    mults=(),
    line_mults: dict[int, int] | None = None,
    curve_mult: int = 0,
) -> DivisorClass:
    """Class dH - sum m_i E_i - sum t_i F_i - t F of a system on the ambient.

    Multiplicities shorter than r are zero-padded.
    """
    mults = tuple(mults)
    if len(mults) > amb.r:
        raise ValueError(f"{len(mults)} multiplicities on an ambient with r = {amb.r}")
    e = tuple(-m for m in mults) + (0,) * (amb.r - len(mults))
    line_mults = line_mults or {}
    unknown = set(line_mults) - set(amb.lines)
    if unknown:
        raise ValueError(f"line multiplicities {sorted(unknown)} not blown up on this ambient")
    f = tuple(-line_mults.get(i, 0) for i in amb.line_order)
    return DivisorClass(amb, d, e, f, -curve_mult)


def _sym_ab2(a1: int, a2: int, a3: int, b1: int, b2: int, b3: int) -> int:
    # trilinear expansion of a monomial A B^2 across the three ordered slots
    return a1 * b2 * b3 + a2 * b1 * b3 + a3 * b1 * b2


def triple_product(d1: DivisorClass, d2: DivisorClass, d3: DivisorClass) -> int:
    """Intersection number D1 . D2 . D3 from the non-vanishing-product table."""
    amb = _same_ambient(d1, d2, d3)
    r = amb.r

    total = d1.h * d2.h * d3.h
    for i in range(r):
        total += d1.e[i] * d2.e[i] * d3.e[i]

    for idx, i in enumerate(amb.line_order):
        fa, fb, fc = d1.f[idx], d2.f[idx], d3.f[idx]
        total += 2 * fa * fb * fc
        total -= _sym_ab2(d1.h, d2.h, d3.h, fa, fb, fc)
        j, k = (2, 3) if i == 1 else (1, i)
        total -= _sym_ab2(d1.e[j - 1], d2.e[j - 1], d3.e[j - 1], fa, fb, fc)
        total -= _sym_ab2(d1.e[k - 1], d2.e[k - 1], d3.e[k - 1], fa, fb, fc)

    if amb.curve_blown:
        ca, cb, cc = d1.curve, d2.curve, d3.curve
        total += 2 * (r - 8) * ca * cb * cc
        total -= 4 * _sym_ab2(d1.h, d2.h, d3.h, ca, cb, cc)
        for i in range(r):
            total -= _sym_ab2(d1.e[i], d2.e[i], d3.e[i], ca, cb, cc)
    return total


def canonical_class(amb: AmbientSpace) -> DivisorClass:
    """K = -(4H - 2 sum E_i - sum_{i in I} F_i - F)."""
    return DivisorClass(
        amb,
        h=-4,
        e=(2,) * amb.r,
        f=(1,) * amb.a,
        curve=1 if amb.curve_blown else 0,
    )


def second_chern(amb: AmbientSpace) -> TwoCycle:
    """Second Chern class of the ambient in the TwoCycle basis.

    X has 6H^2; blowing up the lines of I adds (with a = |I| and the epsilon
    swap when line 1 is present) a H^2 + a E_1^2 + sum_{i in I \\ {1}} E_i^2
    + eps (E_2^2 + E_3^2 - E_1^2); blowing up the curve adds
    4H^2 + sum E_i^2 - 4HF + 2 sum E_i F.
    """
    r, a, eps = amb.r, amb.a, amb.eps
    h2 = 6 + a
    e2 = [0] * r
    if a:
        e2[0] += a
    for i in amb.lines - {1}:
        e2[i - 1] += 1
    if eps:
        e2[0] -= 1
        e2[1] += 1
        e2[2] += 1
    hf = 0
    ef = [0] * r
    if amb.curve_blown:
        h2 += 4
        for i in range(r):
            e2[i] += 1
            ef[i] = 2
        hf = -4
    return TwoCycle(amb, h2, tuple(e2), hf, tuple(ef))


def pair(cycle: TwoCycle, div: DivisorClass) -> int:
    """Pairing of a 2-cycle with a divisor: H^2.H = E_i^2.E_i = 1,
    HF.F = -4, E_iF.F = -1, every other basis pairing 0."""
    _same_ambient(cycle, div)
    total = cycle.h2 * div.h
    total += sum(c * e for c, e in zip(cycle.e2, div.e))
    total += cycle.hf * div.curve * (-4)
    total += sum(c * div.curve * (-1) for c in cycle.ef)
    return total


def rr_bracket(div: DivisorClass) -> tuple[int, int]:
    """Return (D (D-K) (2D-K), c2 . D) for the Riemann-Roch formula."""
    k = canonical_class(div.ambient)
    products = triple_product(div, div - k, 2 * div - k)
    c2d = pair(second_chern(div.ambient), div)
    return products, c2d


def euler_characteristic(div: DivisorClass) -> int:
    """chi = (1/12) [D (D-K) (2D-K) + c2 . D] + 1, exact.

    The bracket is divisible by 12 for every integral class; failure means
    the intersection table is inconsistent and raises.
    """
    products, c2d = rr_bracket(div)
    bracket = products + c2d
    if bracket % 12:
        raise InvariantViolation(f"Riemann-Roch bracket {bracket} not divisible by 12")
    return bracket // 12 + 1


def _defect_ambient(sys: FatPointSystem, defects, curve_blown: bool) -> AmbientSpace:
    lines = frozenset(i + 1 for i, t in enumerate(defects) if t > 0)
    return AmbientSpace(sys.r, lines, curve_blown)


def chi_identity_case1(sys: FatPointSystem, defects=None) -> tuple[int, int]:
    """Both sides of chi_Y(d; m; {t_i}) = chi_X(d; m) + sum binom(t_i+1, 3).

    Equality for every standard system of positive curve degree is what makes
    the case-one dimension formula an Euler characteristic in disguise.
    """
    if defects is None:
        defects = line_defects(sys)
    amb_y = _defect_ambient(sys, defects, curve_blown=False)
    line_mults = {i: defects[i - 1] for i in amb_y.lines}
    lhs = euler_characteristic(
        linear_system_class(amb_y, sys.degree, sys.multiplicities, line_mults)
    )
    amb_x = AmbientSpace(sys.r)
    chi_x = euler_characteristic(linear_system_class(amb_x, sys.degree, sys.multiplicities))
    rhs = chi_x + sum(binom(t + 1, 3) for t in defects)
    return lhs, rhs


def chi_curve_blowup(sys: FatPointSystem, cls: CaseThree) -> int:
    """chi on the curve blow-up of (d; m; {t_i}; t) for a case-three system."""
    amb = _defect_ambient(sys, cls.defects, curve_blown=True)
    line_mults = {i: cls.defects[i - 1] for i in amb.lines}
    return euler_characteristic(
        linear_system_class(amb, sys.degree, sys.multiplicities, line_mults, curve_mult=cls.t)
    )


def chi_identity_case3(sys: FatPointSystem, cls: CaseThree) -> tuple[int, int]:
    """Both sides of the case-three Euler characteristic chain.

    chi_Y(d; m; {t_i}) = chi_Y~(d; m; {t_i}; t) - (r-8) binom(t+1, 3)
                         + y binom(t+1, 2)      with y = -n.

    The sign of the (r-8) binom(t+1, 3) term is forced: expanding the
    Riemann-Roch brackets over the intersection table gives
    chi_Y - chi_Y~ = 2(r-8) binom(t+1, 3) - u binom(t+1, 2), which equals
    -(r-8) binom(t+1, 3) - n binom(t+1, 2) exactly for n = u - (t-1)(r-8).
    Any other sign breaks dim + 1 = chi_Y~ as soon as t >= 2.
    """
    amb_y = _defect_ambient(sys, cls.defects, curve_blown=False)
    line_mults = {i: cls.defects[i - 1] for i in amb_y.lines}
    lhs = euler_characteristic(
        linear_system_class(amb_y, sys.degree, sys.multiplicities, line_mults)
    )
    r = sys.r
    rhs = (
        chi_curve_blowup(sys, cls)
        - (r - 8) * binom(cls.t + 1, 3)
        + (-cls.n) * binom(cls.t + 1, 2)
    )
    return lhs, rhs
