"""Cremona reduction of surface systems to standard form.

The quadruple transformation acts on the four largest multiplicities by
adding k = 2d - (m_1 + m_2 + m_3 + m_4) to them and to the degree; it
preserves the dimension of the system.  The sort-and-transform loop below
either lands in standard form (2d >= m_1 + ... + m_4 with d >= m_1) or
detects an empty system, recording a replayable trace of every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .systems import FatPointSystem


@dataclass(frozen=True)
class ReductionStep:
    """One trace entry: kind is sort | cremona | clamp | drop_zeros | empty."""

    kind: str
    before: FatPointSystem
    after: FatPointSystem
    k: int | None = None
    indices: tuple[int, ...] = ()
    reason: str = ""

    def to_json_dict(self) -> dict:
        out = {
            "step": self.kind,
            "before": self.before.to_json_dict(),
            "after": self.after.to_json_dict(),
        }
        if self.k is not None:
            out["k"] = self.k
        if self.indices:
            out["indices"] = list(self.indices)
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class ReductionTrace:
    initial: FatPointSystem
    steps: tuple[ReductionStep, ...] = ()

    @property
    def final(self) -> FatPointSystem:
        return self.steps[-1].after if self.steps else self.initial

    @property
    def empty(self) -> bool:
        return bool(self.steps) and self.steps[-1].kind == "empty"

    @property
    def empty_reason(self) -> str:
        return self.steps[-1].reason if self.empty else ""

    def replay(self) -> FatPointSystem:
        """Re-apply every step semantically from the initial system."""
        cur = self.initial
        for step in self.steps:
            if cur != step.before:
                raise ValueError(f"trace discontinuity before step {step.kind}")
            cur = _apply_step(cur, step)
            if cur != step.after:
                raise ValueError(f"replay of step {step.kind} diverged")
        return cur

    def to_json_list(self) -> list[dict]:
        return [s.to_json_dict() for s in self.steps]


def _apply_step(sys: FatPointSystem, step: ReductionStep) -> FatPointSystem:
    m = sys.multiplicities
    if step.kind == "sort":
        return FatPointSystem(sys.degree, tuple(sorted(m, reverse=True)))
    if step.kind == "cremona":
        padded = m + (0,) * max(0, 4 - len(m))
        k = step.k
        new = tuple(v + k for v in padded[:4]) + padded[4:]
        return FatPointSystem(sys.degree + k, new)
    if step.kind == "clamp":
        return FatPointSystem(sys.degree, tuple(max(v, 0) for v in m))
    if step.kind == "drop_zeros":
        return FatPointSystem(sys.degree, tuple(v for v in m if v != 0))
    if step.kind == "empty":
        return sys
    raise ValueError(f"unknown step kind {step.kind!r}")


def cremona_quadruple(sys: FatPointSystem) -> FatPointSystem:
    """Transform (d; m) by the cubo-cubic map based at the first four points.

    Callers reducing a system sort first, so those are the four largest
    multiplicities; acting positionally keeps the map an involution (k flips
    sign on the image when nothing clamps).  The multiplicity list is
    zero-padded to length 4 for the computation; the result keeps the padded
    entries and is NOT re-sorted.  Multiplicities pushed negative are clamped
    to 0 (the corresponding exceptional divisors are base components and
    carry no conditions).
    """
    m = sys.multiplicities
    padded = m + (0,) * max(0, 4 - len(m))
    k = 2 * sys.degree - sum(padded[:4])
    new = tuple(max(v + k, 0) for v in padded[:4]) + padded[4:]
    return FatPointSystem(sys.degree + k, new)


def reduce_to_standard(sys: FatPointSystem) -> tuple[FatPointSystem, ReductionTrace]:
    """Drive a system to standard form, or flag it empty.

    The loop fires while 2d < m_1 + m_2 + m_3 + m_4 and d >= m_1; the degree
    strictly decreases across Cremona steps, so it terminates.  Emptiness is
    declared when the final degree is negative or below the largest
    multiplicity (a degree-d surface has point multiplicity at most d).

    The guard uses d >= m_1 rather than the strict d > m_1: with the strict
    form, inputs like (2; 2,2,1) exit non-standard, while the transformation
    preserves dimension at d = m_1 just as well and the relaxed guard always
    reaches standard form.
    """
    if sys.degree < 0 or any(v < 0 for v in sys.multiplicities):
        raise ValueError("reduce_to_standard expects d >= 0 and non-negative multiplicities")

    steps: list[ReductionStep] = []
    cur = sys

    def push(kind: str, after: FatPointSystem, **kw) -> FatPointSystem:
        steps.append(ReductionStep(kind, cur, after, **kw))
        return after

    sorted_m = tuple(sorted(cur.multiplicities, reverse=True))
    if sorted_m != cur.multiplicities:
        cur = push("sort", FatPointSystem(cur.degree, sorted_m))

    cap = 10 * (sys.degree + sys.r + 1)
    iters = 0
    while True:
        m = cur.multiplicities + (0,) * max(0, 4 - cur.r)
        top = m[:4]
        if not (2 * cur.degree < sum(top) and cur.degree >= top[0]):
            break
        iters += 1
        if iters > cap:
            raise RuntimeError(f"reduction iteration cap {cap} exceeded on {sys} (termination bug)")
        k = 2 * cur.degree - sum(top)
        raw = tuple(v + k for v in top) + m[4:]
        cur = push("cremona", FatPointSystem(cur.degree + k, raw), k=k)
        neg = tuple(i for i, v in enumerate(cur.multiplicities) if v < 0)
        if neg:
            clamped = tuple(max(v, 0) for v in cur.multiplicities)
            cur = push("clamp", FatPointSystem(cur.degree, clamped), indices=neg)
        sorted_m = tuple(sorted(cur.multiplicities, reverse=True))
        if sorted_m != cur.multiplicities:
            cur = push("sort", FatPointSystem(cur.degree, sorted_m))

    m1 = cur.multiplicities[0] if cur.r else 0
    if cur.degree < 0 or cur.degree < m1:
        reason = (
            "degree driven negative"
            if cur.degree < 0
            else "degree below largest multiplicity"
        )
        cur = push("empty", cur, reason=reason)
        return cur, ReductionTrace(sys, tuple(steps))

    if any(v == 0 for v in cur.multiplicities):
        dropped = tuple(v for v in cur.multiplicities if v != 0)
        cur = push("drop_zeros", FatPointSystem(cur.degree, dropped))

    assert cur.is_reduced(), f"reduction left {cur} non-standard"
    return cur, ReductionTrace(sys, tuple(steps))
