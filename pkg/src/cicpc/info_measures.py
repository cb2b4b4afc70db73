"""Exact entropy and mutual information over labeled finite joint pmfs.

All quantities use base-2 logarithms (bits) with the 0*log(0) = 0 convention.
Values that come out a hair negative from floating point (within 1e-10) are
clamped to zero; anything more negative signals a broken input and raises.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.special import xlogy

VARIABLES = ("U", "V", "T", "X1", "X2", "Xr1", "Y1", "Y2")

_LN2 = math.log(2.0)
_PMF_TOL = 1e-12
_NEG_SLACK = 1e-10


class MeasureConsistencyError(ArithmeticError):
    """An information measure came out negative beyond numerical slack."""


@dataclass(frozen=True)
class JointPmf:
    """Dense joint pmf whose axes carry variable labels from VARIABLES."""

    labels: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        unknown = [l for l in labels if l not in VARIABLES]
        if unknown:
            raise ValueError(f"unknown variable labels: {unknown}")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate variable labels: {labels}")
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != len(labels):
            raise ValueError(
                f"weights have {w.ndim} axes but {len(labels)} labels given"
            )
        if np.any(w < 0.0):
            raise ValueError("negative probability mass")
        total = float(w.sum())
        if abs(total - 1.0) > _PMF_TOL:
            raise ValueError(f"weights sum to {total!r}, expected 1")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def cards(self) -> tuple[int, ...]:
        return self.weights.shape

    def axis(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not an axis of this pmf") from None


def _as_label_set(vars: Iterable[str] | str) -> frozenset[str]:
    if isinstance(vars, str):
        return frozenset((vars,))
    return frozenset(vars)


def marginalize(pmf: JointPmf, keep: Iterable[str] | str) -> JointPmf:
    """Sum out every axis not in `keep`, preserving the original axis order."""
    keep = _as_label_set(keep)
    missing = keep - set(pmf.labels)
    if missing:
        raise KeyError(f"labels not present in pmf: {sorted(missing)}")
    drop = tuple(i for i, l in enumerate(pmf.labels) if l not in keep)
    if not drop:
        return pmf
    kept_labels = tuple(l for l in pmf.labels if l in keep)
    return JointPmf(kept_labels, pmf.weights.sum(axis=drop))


def _subset_entropy(pmf: JointPmf, vars: frozenset[str]) -> float:
    if not vars:
        return 0.0
    drop = tuple(i for i, l in enumerate(pmf.labels) if l not in vars)
    m = pmf.weights.sum(axis=drop) if drop else pmf.weights
    return float(-xlogy(m, m).sum() / _LN2)


def entropy(pmf: JointPmf, vars: Iterable[str] | str) -> float:
    """Entropy in bits of the marginal on `vars`."""
    vars = _as_label_set(vars)
    missing = vars - set(pmf.labels)
    if missing:
        raise KeyError(f"labels not present in pmf: {sorted(missing)}")
    return _subset_entropy(pmf, vars)


def _clamp(value: float, what: str) -> float:
    if value < 0.0:
        if value < -_NEG_SLACK:
            raise MeasureConsistencyError(f"{what} = {value!r} < -{_NEG_SLACK}")
        return 0.0
    return value


def conditional_entropy(
    pmf: JointPmf, vars: Iterable[str] | str, given: Iterable[str] | str = ()
) -> float:
    """H(vars | given) in bits, clamped to be nonnegative."""
    vars, given = _as_label_set(vars), _as_label_set(given)
    if vars & given:
        raise ValueError(f"vars and given overlap: {sorted(vars & given)}")
    for s in (vars, given):
        missing = s - set(pmf.labels)
        if missing:
            raise KeyError(f"labels not present in pmf: {sorted(missing)}")
    h = _subset_entropy(pmf, vars | given) - _subset_entropy(pmf, given)
    return _clamp(h, "conditional entropy")


def conditional_mutual_information(
    pmf: JointPmf,
    a: Iterable[str] | str,
    b: Iterable[str] | str,
    given: Iterable[str] | str = (),
) -> float:
    """I(a ; b | given) in bits, clamped to be nonnegative."""
    a, b, given = _as_label_set(a), _as_label_set(b), _as_label_set(given)
    for x, y, name in ((a, b, "a/b"), (a, given, "a/given"), (b, given, "b/given")):
        if x & y:
            raise ValueError(f"overlapping variable sets {name}: {sorted(x & y)}")
    for s in (a, b, given):
        missing = s - set(pmf.labels)
        if missing:
            raise KeyError(f"labels not present in pmf: {sorted(missing)}")
    mi = (
        _subset_entropy(pmf, a | given)
        + _subset_entropy(pmf, b | given)
        - _subset_entropy(pmf, given)
        - _subset_entropy(pmf, a | b | given)
    )
    return _clamp(mi, "conditional mutual information")
