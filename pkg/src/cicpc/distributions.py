"""Joint distributions over auxiliaries, inputs and outputs.

Builders attach the channel law to an input-side distribution, which makes the
required Markov structure (auxiliaries -> inputs -> outputs) hold by
construction.  The logit layouts map unconstrained parameter vectors to
simplex-valued factor rows for the optimizers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .channel_model import AlphabetSpec, ChannelLaw
from .info_measures import JointPmf

ROW_TOL = 1e-12
_MARKOV_EPS = 1e-12


@dataclass(frozen=True)
class AuxCardinalities:
    card_u: int
    card_v: int
    card_t: int

    def __post_init__(self) -> None:
        for c in (self.card_u, self.card_v, self.card_t):
            if not isinstance(c, int) or c < 1:
                raise ValueError(f"auxiliary cardinality must be a positive int, got {c!r}")

    @classmethod
    def default_for(cls, alphabets: AlphabetSpec) -> "AuxCardinalities":
        m = min(4, alphabets.card_x1 * alphabets.card_x2 * alphabets.card_xr1)
        return cls(m, m, m)


def _check_rows(name: str, arr: np.ndarray) -> None:
    if np.any(arr < 0.0):
        raise ValueError(f"{name} has a negative entry")
    sums = arr.sum(axis=-1)
    if np.any(np.abs(sums - 1.0) > ROW_TOL):
        worst = float(np.abs(sums - 1.0).max())
        raise ValueError(f"{name} rows sum off by up to {worst:.3e}")


@dataclass(frozen=True)
class InnerFactorization:
    """Input-side factors of the decode-and-forward codebook distribution.

    f_xr1[r]            relay input pmf
    f_ux2[r, u, j]      (u, x2) given xr1
    f_v[u, j, r, v]     v given (u, x2, xr1)
    f_x1[u, v, j, r, i] x1 given (u, v, x2, xr1)
    """

    f_xr1: np.ndarray
    f_ux2: np.ndarray
    f_v: np.ndarray
    f_x1: np.ndarray

    def __post_init__(self) -> None:
        f_xr1 = np.asarray(self.f_xr1, dtype=np.float64)
        f_ux2 = np.asarray(self.f_ux2, dtype=np.float64)
        f_v = np.asarray(self.f_v, dtype=np.float64)
        f_x1 = np.asarray(self.f_x1, dtype=np.float64)
        (r,) = f_xr1.shape
        r2, u, j = f_ux2.shape
        u2, j2, r3, v = f_v.shape
        u3, v2, j3, r4, _ = f_x1.shape
        if not (r == r2 == r3 == r4 and u == u2 == u3 and j == j2 == j3 and v == v2):
            raise ValueError("factor shapes are inconsistent")
        _check_rows("f_xr1", f_xr1)
        _check_rows("f_ux2", f_ux2.reshape(r, u * j))
        _check_rows("f_v", f_v)
        _check_rows("f_x1", f_x1)
        for name, arr in (("f_xr1", f_xr1), ("f_ux2", f_ux2), ("f_v", f_v), ("f_x1", f_x1)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def cards(self) -> tuple[int, int]:
        """(card_u, card_v)."""
        return (self.f_ux2.shape[1], self.f_v.shape[3])


@dataclass(frozen=True)
class OuterWitness:
    """Free input-side joint p(v,t,x1,x2,xr1) for the outer bound."""

    joint: JointPmf

    def __post_init__(self) -> None:
        if self.joint.labels != ("V", "T", "X1", "X2", "Xr1"):
            raise ValueError(f"outer witness must be over (V,T,X1,X2,Xr1), got {self.joint.labels}")


def attach_channel(inputs: JointPmf, law: ChannelLaw) -> JointPmf:
    """Extend an input-side joint (any aux axes plus X1,X2,Xr1) by the channel."""
    for needed in ("X1", "X2", "Xr1"):
        if needed not in inputs.labels:
            raise ValueError(f"input joint is missing axis {needed}")
    if "Y1" in inputs.labels or "Y2" in inputs.labels:
        raise ValueError("input joint already carries output axes")
    order = [l for l in inputs.labels if l not in ("X1", "X2", "Xr1")] + ["X1", "X2", "Xr1"]
    perm = tuple(inputs.axis(l) for l in order)
    w = inputs.weights.transpose(perm)
    a = law.alphabets
    expect = (a.card_x1, a.card_x2, a.card_xr1)
    if w.shape[-3:] != expect:
        raise ValueError(f"input cardinalities {w.shape[-3:]} do not match channel {expect}")
    joint = np.einsum("...ijr,ijrmn->...ijrmn", w, law.transition)
    return JointPmf(tuple(order) + ("Y1", "Y2"), joint)


def build_inner_joint(factors: InnerFactorization, law: ChannelLaw) -> JointPmf:
    """Joint over (U,V,X1,X2,Xr1,Y1,Y2) from the factorization and the channel."""
    a = law.alphabets
    if factors.f_xr1.shape[0] != a.card_xr1 or factors.f_ux2.shape[2] != a.card_x2 \
            or factors.f_x1.shape[4] != a.card_x1:
        raise ValueError("factor cardinalities do not match the channel alphabets")
    joint = np.einsum(
        "r,ruj,ujrv,uvjri,ijrmn->uvijrmn",
        factors.f_xr1, factors.f_ux2, factors.f_v, factors.f_x1, law.transition,
    )
    return JointPmf(("U", "V", "X1", "X2", "Xr1", "Y1", "Y2"), joint)


def build_outer_joint(witness: OuterWitness, law: ChannelLaw) -> JointPmf:
    """Joint over (V,T,X1,X2,Xr1,Y1,Y2); satisfies (V,T)->(X1,X2,Xr1,Y1)->Y2."""
    return attach_channel(witness.joint, law)


def verify_markov(
    pmf: JointPmf,
    left: Iterable[str] | str,
    mid: Iterable[str] | str,
    right: Iterable[str] | str,
) -> float:
    """Max violation of the chain left -> mid -> right.

    Returns max over events of |p(right|mid,left) - p(right|mid)|, restricted
    to (left,mid) events with probability above 1e-12.
    """
    groups = []
    for g in (left, mid, right):
        labels = (g,) if isinstance(g, str) else tuple(g)
        groups.append(labels)
    flat = [l for g in groups for l in g]
    if len(set(flat)) != len(flat):
        raise ValueError("left/mid/right must be disjoint")
    keep = set(flat)
    drop = tuple(i for i, l in enumerate(pmf.labels) if l not in keep)
    w = pmf.weights.sum(axis=drop) if drop else pmf.weights
    kept_labels = [l for l in pmf.labels if l in keep]
    perm = tuple(kept_labels.index(l) for g in groups for l in g)
    w = w.transpose(perm)
    nl = int(np.prod([w.shape[i] for i in range(len(groups[0]))], initial=1))
    nm = int(np.prod([w.shape[len(groups[0]) + i] for i in range(len(groups[1]))], initial=1))
    arr = w.reshape(nl, nm, -1)
    plm = arr.sum(axis=2)
    pm = plm.sum(axis=0)
    mid_ok = pm > _MARKOV_EPS
    cond_m = np.zeros((nm, arr.shape[2]))
    cond_m[mid_ok] = arr.sum(axis=0)[mid_ok] / pm[mid_ok, None]
    lm_ok = plm > _MARKOV_EPS
    if not lm_ok.any():
        return 0.0
    cond_lm = arr[lm_ok] / plm[lm_ok, None]
    mids = np.nonzero(lm_ok)[1]
    return float(np.abs(cond_lm - cond_m[mids]).max())


# ---------------------------------------------------------------------------
# Logit parameterizations.  A layout is an ordered list of row blocks; each
# block maps a slice of the parameter vector through a row-wise softmax, so
# theta = 0 is the all-uniform distribution and every theta is feasible.
# ---------------------------------------------------------------------------


def _softmax_rows(theta: np.ndarray) -> np.ndarray:
    z = theta - theta.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


@dataclass(frozen=True)
class LogitLayout:
    """Block structure of a logit vector: (conditioning shape, row length) pairs."""

    blocks: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def size(self) -> int:
        n = 0
        for cond, k in self.blocks:
            n += int(np.prod(cond, initial=1)) * k
        return n

    def split(self, theta: np.ndarray) -> list[np.ndarray]:
        """Softmax each block; theta may carry leading batch axes."""
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape[-1] != self.size:
            raise ValueError(f"theta length {theta.shape[-1]} != layout size {self.size}")
        lead = theta.shape[:-1]
        out, offset = [], 0
        for cond, k in self.blocks:
            n = int(np.prod(cond, initial=1)) * k
            seg = theta[..., offset:offset + n].reshape(lead + cond + (k,))
            out.append(_softmax_rows(seg))
            offset += n
        return out

    def sample_logits(self, rng: np.random.Generator) -> np.ndarray:
        """Logits whose softmax rows are symmetric Dirichlet(1) samples."""
        g = rng.gamma(1.0, size=self.size)
        return np.log(np.maximum(g, 1e-300))


def inner_layout(alphabets: AlphabetSpec, cards: AuxCardinalities) -> LogitLayout:
    i, j, r = alphabets.input_cards
    u, v = cards.card_u, cards.card_v
    return LogitLayout((
        ((), r),
        ((r,), u * j),
        ((u, j, r), v),
        ((u, v, j, r), i),
    ))


def outer_layout(alphabets: AlphabetSpec, cards: AuxCardinalities) -> LogitLayout:
    """Chain-rule blocks p(xr1) p(x2|xr1) p(x1|x2,xr1) p(v|inputs) p(t|v,inputs)."""
    i, j, r = alphabets.input_cards
    return LogitLayout((
        ((), r),
        ((r,), j),
        ((j, r), i),
        ((i, j, r), cards.card_v),
        ((cards.card_v, i, j, r), cards.card_t),
    ))


def condition_layout(alphabets: AlphabetSpec, cards: AuxCardinalities) -> LogitLayout:
    """Chain-rule blocks p(xr1) p(x2|xr1) p(x1|x2,xr1) p(v|inputs)."""
    i, j, r = alphabets.input_cards
    return LogitLayout((
        ((), r),
        ((r,), j),
        ((j, r), i),
        ((i, j, r), cards.card_v),
    ))


def params_to_factorization(
    theta: np.ndarray, alphabets: AlphabetSpec, cards: AuxCardinalities
) -> InnerFactorization:
    """Map a logit vector to a full-support inner factorization."""
    layout = inner_layout(alphabets, cards)
    f_xr1, f_ux2_flat, f_v, f_x1 = layout.split(np.asarray(theta))
    r = alphabets.card_xr1
    f_ux2 = f_ux2_flat.reshape(r, cards.card_u, alphabets.card_x2)
    return InnerFactorization(f_xr1, f_ux2, f_v, f_x1)


def params_to_outer_witness(
    theta: np.ndarray, alphabets: AlphabetSpec, cards: AuxCardinalities
) -> OuterWitness:
    """Map a logit vector to a full-support outer witness joint."""
    layout = outer_layout(alphabets, cards)
    f_r, f_x2, f_x1, f_v, f_t = layout.split(np.asarray(theta))
    w = np.einsum("r,rj,jri,ijrv,vijrt->vtijr", f_r, f_x2, f_x1, f_v, f_t)
    return OuterWitness(JointPmf(("V", "T", "X1", "X2", "Xr1"), w))


def params_to_condition_joint(
    theta: np.ndarray, alphabets: AlphabetSpec, cards: AuxCardinalities
) -> JointPmf:
    """Map a logit vector to a full-support input joint over (V,X1,X2,Xr1)."""
    layout = condition_layout(alphabets, cards)
    f_r, f_x2, f_x1, f_v = layout.split(np.asarray(theta))
    w = np.einsum("r,rj,jri,ijrv->vijr", f_r, f_x2, f_x1, f_v)
    return JointPmf(("V", "X1", "X2", "Xr1"), w)


def sample_witness(
    kind: Literal["inner", "outer"],
    alphabets: AlphabetSpec,
    cards: AuxCardinalities,
    seed: int | np.random.SeedSequence,
) -> InnerFactorization | OuterWitness:
    """Deterministic-in-seed witness draw; every row is symmetric Dirichlet(1)."""
    rng = np.random.default_rng(seed)
    if kind == "inner":
        layout = inner_layout(alphabets, cards)
        return params_to_factorization(layout.sample_logits(rng), alphabets, cards)
    if kind == "outer":
        layout = outer_layout(alphabets, cards)
        return params_to_outer_witness(layout.sample_logits(rng), alphabets, cards)
    raise ValueError(f"unknown witness kind {kind!r}")
