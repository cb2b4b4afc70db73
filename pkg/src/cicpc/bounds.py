"""Rate-bound evaluation for a fixed joint distribution.

Each evaluator computes the right-hand sides of one bound family in bits:

* outer bound ("t1"): six caps over joints with (V,T) attached ahead of the
  inputs; the sum cap `e` carries a subtraction and may be negative.
* inner bound ("t2"): decode-and-forward achievable rates; r2 is the min of a
  destination-2 term and the relay-decoding term.
* degraded capacity ("t3"): same formulas as the inner bound, valid as the
  capacity region once the channel is degraded; evaluated by the same code.
* semideterministic capacity ("t4"): inner bound with the u layer removed and
  H(y1|...) replacing the x1 information terms.

Polytopes live in the (R1, R2) quadrant with axis caps and one sum cap.
"""
from __future__ import annotations

from dataclasses import dataclass

from .info_measures import (
    JointPmf,
    conditional_entropy,
    conditional_mutual_information,
)

THEOREMS = ("t1", "t2", "t3", "t4")

_SEMIDET_GUARD_TOL = 1e-9
_BIND_TOL = 1e-9


class ChannelClassError(ValueError):
    """A bound was requested for a channel class the joint does not belong to."""


@dataclass(frozen=True)
class OuterBoundVector:
    a: float  # R1 cap
    b: float  # R2 cap via (V,X2,Xr1)
    c: float  # R2 cap via full inputs
    d: float  # sum cap via V
    e: float  # sum cap with the subtracted term, may be negative
    f: float  # sum cap via both outputs


@dataclass(frozen=True)
class InnerBoundVector:
    r1: float
    r2: float
    sum_rate: float
    r2_args: tuple[float, float]  # (destination-2 term, relay-decoding term)


@dataclass(frozen=True)
class SemidetBoundVector:
    r1: float
    r2: float
    sum_rate: float


@dataclass(frozen=True)
class CollapseDiagnostic:
    """How far min(r2 args) falls below the destination-2 term, per joint."""

    gap: float  # min(args) - destination-2 term, always <= 0
    margin: float  # relay term - destination-2 term; < 0 means more-capable fails here


@dataclass(frozen=True)
class RatePolytope:
    r1_cap: float
    r2_cap: float
    sum_cap: float

    @property
    def is_empty(self) -> bool:
        return self.r1_cap < 0.0 or self.r2_cap < 0.0 or self.sum_cap < 0.0

    @property
    def halfspaces(self) -> list[tuple[int, int, float]]:
        return [(1, 0, self.r1_cap), (0, 1, self.r2_cap), (1, 1, self.sum_cap)]

    def vertices(self) -> list[tuple[float, float]]:
        if self.is_empty:
            return []
        a, b, s = self.r1_cap, self.r2_cap, self.sum_cap
        x_hi = min(a, s)
        y_at_x_hi = min(b, s - x_hi)
        y_hi = min(b, s)
        x_at_y_hi = min(a, s - y_hi)
        candidates = [
            (0.0, 0.0),
            (x_hi, 0.0),
            (x_hi, y_at_x_hi),
            (x_at_y_hi, y_hi),
            (0.0, y_hi),
        ]
        out: list[tuple[float, float]] = []
        for v in candidates:
            if v not in out:
                out.append(v)
        return out


def eval_outer_bound(joint: JointPmf) -> OuterBoundVector:
    """Outer-bound caps; requires axes (V,T,X1,X2,Xr1,Y1,Y2)."""
    mi = conditional_mutual_information
    b = mi(joint, ("V", "X2", "Xr1"), "Y2")
    return OuterBoundVector(
        a=mi(joint, "X1", "Y1", ("X2", "Xr1")),
        b=b,
        c=mi(joint, ("X1", "X2", "Xr1"), "Y2"),
        d=b + mi(joint, "X1", "Y1", ("V", "X2", "Xr1")),
        e=(
            mi(joint, ("T", "X1", "X2"), "Y1", "Xr1")
            + mi(joint, "V", "Y2", ("T", "Xr1"))
            - mi(joint, "V", "Y1", ("T", "Xr1"))
        ),
        f=mi(joint, ("X1", "X2"), ("Y1", "Y2"), "Xr1"),
    )


def eval_inner_bound(joint: JointPmf) -> InnerBoundVector:
    """Decode-and-forward caps; requires axes (U,V,X1,X2,Xr1,Y1,Y2)."""
    mi = conditional_mutual_information
    arg_y2 = mi(joint, ("U", "V", "X2", "Xr1"), "Y2")
    arg_y1 = mi(joint, ("U", "V", "X2"), "Y1", "Xr1")
    r2 = min(arg_y2, arg_y1)
    return InnerBoundVector(
        r1=mi(joint, "X1", "Y1", ("U", "X2", "Xr1")),
        r2=r2,
        sum_rate=r2 + mi(joint, "X1", "Y1", ("U", "V", "X2", "Xr1")),
        r2_args=(arg_y2, arg_y1),
    )


def eval_semidet_bound(joint: JointPmf) -> SemidetBoundVector:
    """Semideterministic capacity caps; requires axes (V,X1,X2,Xr1,Y1,Y2).

    Guards that y1 is deterministic given the inputs on this joint, since the
    entropy forms assume H(Y1|X1,X2,Xr1) = 0.
    """
    resid = conditional_entropy(joint, "Y1", ("X1", "X2", "Xr1"))
    if resid > _SEMIDET_GUARD_TOL:
        raise ChannelClassError(
            f"joint is not semideterministic: H(Y1|X1,X2,Xr1) = {resid:.3e} bits"
        )
    r2 = conditional_mutual_information(joint, ("V", "X2", "Xr1"), "Y2")
    return SemidetBoundVector(
        r1=conditional_entropy(joint, "Y1", ("X2", "Xr1")),
        r2=r2,
        sum_rate=r2 + conditional_entropy(joint, "Y1", ("V", "X2", "Xr1")),
    )


def decode_forward_collapse(joint: JointPmf) -> CollapseDiagnostic:
    """Check whether the r2 min collapses onto the destination-2 term.

    The collapse (gap == 0) must hold whenever the more-capable inequality
    holds for this joint; margin < 0 pinpoints a joint that violates it.
    """
    mi = conditional_mutual_information
    arg_y2 = mi(joint, ("V", "X2", "Xr1"), "Y2")
    arg_y1 = mi(joint, ("V", "X2"), "Y1", "Xr1")
    return CollapseDiagnostic(gap=min(arg_y2, arg_y1) - arg_y2, margin=arg_y1 - arg_y2)


def relay_bc_specialize(joint: JointPmf) -> InnerBoundVector:
    """Inner bound specialized to degenerate V and X2 (relay broadcast form).

    With |V| = |X2| = 1 the conditioning on (V, X2) drops out and the caps
    reduce to I(X1;Y1|U,Xr1), min(I(U,Xr1;Y2), I(U;Y1|Xr1)) and their sum;
    the result must agree exactly with eval_inner_bound on the same joint.
    """
    for label in ("V", "X2"):
        if joint.cards[joint.axis(label)] != 1:
            raise ChannelClassError(f"{label} is not degenerate in this joint")
    mi = conditional_mutual_information
    arg_y2 = mi(joint, ("U", "Xr1"), "Y2")
    arg_y1 = mi(joint, "U", "Y1", "Xr1")
    r2 = min(arg_y2, arg_y1)
    r1 = mi(joint, "X1", "Y1", ("U", "Xr1"))
    return InnerBoundVector(r1=r1, r2=r2, sum_rate=r2 + r1, r2_args=(arg_y2, arg_y1))


def bounds_to_polytope(
    vec: OuterBoundVector | InnerBoundVector | SemidetBoundVector,
) -> RatePolytope:
    """Halfspace form of a bound vector; empty polytope when any cap is negative."""
    if isinstance(vec, OuterBoundVector):
        return RatePolytope(vec.a, min(vec.b, vec.c), min(vec.d, vec.e, vec.f))
    if isinstance(vec, (InnerBoundVector, SemidetBoundVector)):
        return RatePolytope(vec.r1, vec.r2, vec.sum_rate)
    raise TypeError(f"unsupported bound vector type {type(vec)!r}")


def active_constraints(poly: RatePolytope, r1: float, r2: float) -> str:
    """Labels of the caps binding at a point of the polytope, '+'-joined."""
    names = []
    if abs(r1 - poly.r1_cap) <= _BIND_TOL:
        names.append("r1")
    if abs(r2 - poly.r2_cap) <= _BIND_TOL:
        names.append("r2")
    if abs((r1 + r2) - poly.sum_cap) <= _BIND_TOL:
        names.append("sum")
    return "+".join(names) if names else "interior"
