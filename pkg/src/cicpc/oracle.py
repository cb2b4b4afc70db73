"""Brute-force grid certification of the optimizer on tiny binary instances.

The union in every bound is over all joint input distributions (the stated
factorizations are chain-rule decompositions, hence unconstrained), so the
oracle enumerates every input joint whose weights are integer multiples of
1/levels.  Evaluation code here is deliberately self-contained: it shares
nothing with the search engine it certifies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.special import xlogy

from .channel_model import ChannelLaw, classify_semideterministic
from .bounds import ChannelClassError
from .region_builder import Frontier, FrontierMetadata, RatePoint, SearchConfig, compute_frontier

_LN2 = math.log(2.0)
_BATCH = 8192


class GridTooLargeError(ValueError):
    """The composition grid exceeds the evaluation cap."""


@dataclass(frozen=True)
class GridSpec:
    levels: int = 4
    max_evaluations: int = 10_000_000

    def __post_init__(self) -> None:
        if self.levels < 2:
            raise ValueError("levels must be >= 2")


def _grid_size(levels: int, cells: int) -> int:
    return math.comb(levels + cells - 1, cells - 1)


def _compositions(total: int, parts: int):
    """All vectors of `parts` nonnegative ints summing to `total` (stars and bars)."""
    n = total + parts - 1
    for bars in combinations(range(n), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(n - 1 - prev)
        yield out


def _entropy_bits(m: np.ndarray) -> np.ndarray:
    b = m.shape[0]
    return -xlogy(m, m).reshape(b, -1).sum(axis=1) / _LN2


class _Joint:
    """Subset entropies of a batched joint, memoized per instance."""

    def __init__(self, joint: np.ndarray):
        self.joint = joint
        self.ndim = joint.ndim - 1
        self._cache: dict[frozenset, np.ndarray] = {}

    def h(self, *keep: int) -> np.ndarray:
        key = frozenset(keep)
        got = self._cache.get(key)
        if got is not None:
            return got
        if not key:
            val = np.zeros(self.joint.shape[0])
        else:
            drop = tuple(i + 1 for i in range(self.ndim) if i not in key)
            m = self.joint.sum(axis=drop) if drop else self.joint
            val = _entropy_bits(m)
        self._cache[key] = val
        return val

    def mi(self, a: tuple, b: tuple, g: tuple = ()) -> np.ndarray:
        sa, sb, sg = set(a), set(b), set(g)
        val = (
            self.h(*(sa | sg)) + self.h(*(sb | sg)) - self.h(*sg) - self.h(*(sa | sb | sg))
        )
        return np.maximum(val, 0.0)


def _caps_outer(w: np.ndarray, t: np.ndarray) -> np.ndarray:
    # input axes (v, t, x1, x2, xr1); joint axes V,T,X1,X2,Xr1,Y1,Y2 = 0..6
    j = _Joint(np.einsum("bvtijr,ijrmn->bvtijrmn", w, t))
    V, T, X1, X2, XR, Y1, Y2 = range(7)
    a = j.mi((X1,), (Y1,), (X2, XR))
    b = j.mi((V, X2, XR), (Y2,))
    c = j.mi((X1, X2, XR), (Y2,))
    d = b + j.mi((X1,), (Y1,), (V, X2, XR))
    e = (
        j.mi((T, X1, X2), (Y1,), (XR,))
        + j.mi((V,), (Y2,), (T, XR))
        - j.mi((V,), (Y1,), (T, XR))
    )
    f = j.mi((X1, X2), (Y1, Y2), (XR,))
    return np.stack([a, np.minimum(b, c), np.minimum(d, np.minimum(e, f))], axis=1)


def _caps_inner(w: np.ndarray, t: np.ndarray) -> np.ndarray:
    # input axes (u, v, x1, x2, xr1); joint axes U,V,X1,X2,Xr1,Y1,Y2 = 0..6
    j = _Joint(np.einsum("buvijr,ijrmn->buvijrmn", w, t))
    U, V, X1, X2, XR, Y1, Y2 = range(7)
    r1 = j.mi((X1,), (Y1,), (U, X2, XR))
    arg_y2 = j.mi((U, V, X2, XR), (Y2,))
    arg_y1 = j.mi((U, V, X2), (Y1,), (XR,))
    r2 = np.minimum(arg_y2, arg_y1)
    extra = j.mi((X1,), (Y1,), (U, V, X2, XR))
    return np.stack([r1, r2, r2 + extra], axis=1)


def _caps_semidet(w: np.ndarray, t: np.ndarray) -> np.ndarray:
    # input axes (v, x1, x2, xr1); joint axes V,X1,X2,Xr1,Y1,Y2 = 0..5
    j = _Joint(np.einsum("bvijr,ijrmn->bvijrmn", w, t))
    V, X1, X2, XR, Y1, Y2 = range(6)
    r1 = np.maximum(j.h(Y1, X2, XR) - j.h(X2, XR), 0.0)
    r2 = j.mi((V, X2, XR), (Y2,))
    tail = np.maximum(j.h(Y1, V, X2, XR) - j.h(V, X2, XR), 0.0)
    return np.stack([r1, r2, r2 + tail], axis=1)


_ORACLE_AXES = {
    "t1": ("outer", _caps_outer, 2),  # (kind, caps fn, number of binary aux axes)
    "t2": ("inner", _caps_inner, 2),
    "t3": ("inner", _caps_inner, 2),
    "t4": ("semidet", _caps_semidet, 1),
}


def oracle_frontier(law: ChannelLaw, theorem: str, grid: GridSpec) -> Frontier:
    """Exact Pareto frontier over the composition grid of input joints."""
    if theorem not in _ORACLE_AXES:
        raise ValueError(f"unknown theorem id {theorem!r}")
    if any(c > 2 for c in law.alphabets.cards):
        raise GridTooLargeError("oracle runs on fully binary channels only")
    kind, caps_fn, n_aux = _ORACLE_AXES[theorem]
    if kind == "semidet" and not classify_semideterministic(law).semideterministic:
        raise ChannelClassError("channel is not semideterministic")
    input_shape = (2,) * n_aux + law.alphabets.input_cards
    cells = int(np.prod(input_shape))
    count = _grid_size(grid.levels, cells)
    if count > grid.max_evaluations:
        raise GridTooLargeError(
            f"{count} grid points exceed the cap {grid.max_evaluations}"
        )
    t = law.transition
    all_r1: list[np.ndarray] = []
    all_r2: list[np.ndarray] = []
    all_counts: list[np.ndarray] = []
    batch: list[list[int]] = []

    def flush() -> None:
        if not batch:
            return
        counts = np.asarray(batch, dtype=np.int64)
        w = (counts / grid.levels).reshape((-1,) + input_shape)
        caps = caps_fn(w, t)
        a, b, s = caps[:, 0], caps[:, 1], caps[:, 2]
        x1 = np.minimum(a, s)
        y1 = np.minimum(b, s - x1)
        y2 = np.minimum(b, s)
        x2 = np.minimum(a, s - y2)
        all_r1.append(np.concatenate([x1, x2]))
        all_r2.append(np.concatenate([y1, y2]))
        all_counts.append(np.concatenate([counts, counts]))
        batch.clear()

    for comp in _compositions(grid.levels, cells):
        batch.append(comp)
        if len(batch) >= _BATCH:
            flush()
    flush()
    r1 = np.concatenate(all_r1)
    r2 = np.concatenate(all_r2)
    counts = np.concatenate(all_counts)
    order = np.lexsort((-r2, -r1))
    kept: list[int] = []
    tol = 1e-9
    for idx in order:
        if kept and (r2[idx] <= r2[kept[-1]] + tol or r1[idx] >= r1[kept[-1]] - tol):
            continue
        kept.append(int(idx))
    kept.reverse()
    points = tuple(
        RatePoint(
            r1=float(r1[i]),
            r2=float(r2[i]),
            witness=tuple(int(c) for c in counts[i]),
            active_constraint="grid",
        )
        for i in kept
    ) or (RatePoint(r1=0.0, r2=0.0, active_constraint="origin"),)
    meta = FrontierMetadata(
        theorem=theorem,
        aux=None,
        seed=None,
        restarts=0,
        local_steps=0,
        mu_grid=(),
        hull=False,
        pareto_tol=tol,
        source="grid",
        extra={"levels": grid.levels, "grid_points": count, "cells": cells},
    )
    return Frontier(points=points, metadata=meta)


def compare_to_oracle(
    law: ChannelLaw, theorem: str, cfg: SearchConfig, grid: GridSpec
) -> float:
    """Max over mu of oracle support minus optimizer support (<= tol passes)."""
    oracle = oracle_frontier(law, theorem, grid)
    searched = compute_frontier(law, theorem, cfg)
    mus = sorted(set(searched.metadata.mu_grid) | set(oracle.metadata.mu_grid))
    if not mus:
        mus = list(np.linspace(0.0, 1.0, 21))
    return max(oracle.support(mu) - searched.support(mu) for mu in mus)
