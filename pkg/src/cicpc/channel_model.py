"""Discrete memoryless channel model p(y1,y2|x1,x2,xr1) and its classifiers.

The channel couples two sources (x1 cognitive, x2 primary) and a relay input
xr1 driven by destination 1, to the two destination outputs (y1, y2).  Two
structural classes matter downstream:

* degraded: the law factors as p(y1|x1,x2,xr1) * q(y2|y1,xr1), so destination
  2 sees a noisy function of what destination 1 saw plus the relay input;
* semideterministic: y1 is a deterministic function of (x1,x2,xr1).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SLICE_TOL = 1e-12
CLASSIFY_TOL = 1e-9
DEFAULT_CELL_LIMIT = 4096

_ALPHABET_KEYS = ("x1", "x2", "xr1", "y1", "y2")


class ChannelDataError(ValueError):
    """Structurally malformed channel data (bad file, wrong shapes/fields)."""


class ChannelValidationError(ValueError):
    """Well-formed data that is not a valid conditional pmf tensor."""


@dataclass(frozen=True)
class AlphabetSpec:
    card_x1: int
    card_x2: int
    card_xr1: int
    card_y1: int
    card_y2: int

    def __post_init__(self) -> None:
        for name, card in zip(_ALPHABET_KEYS, self.cards):
            if not isinstance(card, int) or card < 1:
                raise ChannelDataError(f"alphabet {name} must be a positive int, got {card!r}")

    @property
    def cards(self) -> tuple[int, int, int, int, int]:
        return (self.card_x1, self.card_x2, self.card_xr1, self.card_y1, self.card_y2)

    @property
    def cells(self) -> int:
        n = 1
        for c in self.cards:
            n *= c
        return n

    @property
    def input_cards(self) -> tuple[int, int, int]:
        return (self.card_x1, self.card_x2, self.card_xr1)


@dataclass(frozen=True)
class ChannelLaw:
    """Dense transition tensor indexed [x1][x2][xr1][y1][y2]."""

    alphabets: AlphabetSpec
    transition: np.ndarray
    cell_limit: int = DEFAULT_CELL_LIMIT

    def __post_init__(self) -> None:
        t = np.asarray(self.transition, dtype=np.float64)
        if t.shape != self.alphabets.cards:
            raise ChannelDataError(
                f"transition shape {t.shape} does not match alphabets {self.alphabets.cards}"
            )
        if self.alphabets.cells > self.cell_limit:
            raise ChannelDataError(
                f"{self.alphabets.cells} tensor cells exceed the dense limit {self.cell_limit}"
            )
        t = t.copy()
        t.setflags(write=False)
        object.__setattr__(self, "transition", t)


@dataclass(frozen=True)
class SemideterministicReport:
    semideterministic: bool
    y1_map: np.ndarray | None  # (x1,x2,xr1) -> y1, present iff semideterministic
    max_deviation: float


@dataclass(frozen=True)
class DegradedReport:
    degraded: bool
    degrading_kernel: np.ndarray | None  # q[y1, xr1, y2], present iff degraded
    max_deviation: float
    witness: tuple[int, ...] | None  # (x1,x2,xr1,y1,y2) index of the worst violation


@dataclass(frozen=True)
class ClassificationReport:
    semideterministic: bool
    y1_map: np.ndarray | None
    degraded: bool
    degrading_kernel: np.ndarray | None
    max_deviation: float


def validate_channel(law: ChannelLaw) -> float:
    """Accept the law iff every conditional slice is a pmf; return the worst deviation.

    Raises ChannelValidationError on a negative entry or a slice whose mass
    differs from 1 by more than SLICE_TOL.
    """
    t = law.transition
    if np.any(t < 0.0):
        idx = tuple(int(i) for i in np.argwhere(t < 0.0)[0])
        raise ChannelValidationError(f"negative transition probability at {idx}")
    sums = t.sum(axis=(3, 4))
    deviation = float(np.abs(sums - 1.0).max())
    if deviation > SLICE_TOL:
        idx = tuple(int(i) for i in np.unravel_index(np.abs(sums - 1.0).argmax(), sums.shape))
        raise ChannelValidationError(
            f"slice (x1,x2,xr1)={idx} sums to {float(sums[idx])!r}, deviation {deviation:.3e}"
        )
    return deviation


def extract_y1_law(law: ChannelLaw) -> np.ndarray:
    """Marginal conditional p(y1|x1,x2,xr1), shape (x1,x2,xr1,y1)."""
    return law.transition.sum(axis=4)


def classify_semideterministic(law: ChannelLaw, tol: float = CLASSIFY_TOL) -> SemideterministicReport:
    """Deterministic-y1 test: every entry of p(y1|x1,x2,xr1) within tol of 0 or 1."""
    py1 = extract_y1_law(law)
    deviation = float(np.minimum(py1, np.abs(1.0 - py1)).max())
    if deviation > tol:
        return SemideterministicReport(False, None, deviation)
    y1_map = py1.argmax(axis=3)
    return SemideterministicReport(True, y1_map, deviation)


def classify_degraded(law: ChannelLaw, tol: float = CLASSIFY_TOL) -> DegradedReport:
    """Constructive test for the factorization p(y1|x1,x2,xr1) * q(y2|y1,xr1).

    For each (y1, xr1) the candidate kernel row is read off any input pair
    (x1,x2) that reaches y1; rows no input reaches are free and filled uniform.
    Degradedness holds iff the reconstructed tensor matches entrywise within tol.
    """
    a = law.alphabets
    t = law.transition
    py1 = extract_y1_law(law)
    kernel = np.full((a.card_y1, a.card_xr1, a.card_y2), 1.0 / a.card_y2)
    for y1 in range(a.card_y1):
        for r in range(a.card_xr1):
            reach = np.argwhere(py1[:, :, r, y1] > tol)
            if reach.size:
                x1, x2 = (int(i) for i in reach[0])
                kernel[y1, r] = t[x1, x2, r, y1, :] / py1[x1, x2, r, y1]
    rebuilt = np.einsum("ijrm,mrn->ijrmn", py1, kernel)
    residual = np.abs(t - rebuilt)
    deviation = float(residual.max())
    if deviation > tol:
        witness = tuple(int(i) for i in np.unravel_index(residual.argmax(), residual.shape))
        return DegradedReport(False, None, deviation, witness)
    return DegradedReport(True, kernel, deviation, None)


def classify_channel(law: ChannelLaw, tol: float = CLASSIFY_TOL) -> ClassificationReport:
    sd = classify_semideterministic(law, tol)
    dg = classify_degraded(law, tol)
    return ClassificationReport(
        semideterministic=sd.semideterministic,
        y1_map=sd.y1_map,
        degraded=dg.degraded,
        degrading_kernel=dg.degrading_kernel,
        max_deviation=max(sd.max_deviation, dg.max_deviation),
    )


# ---------------------------------------------------------------------------
# Channel spec files: JSON with named cardinalities and the nested transition
# array in index order x1,x2,xr1,y1,y2.  Floats are printed with 17 significant
# digits so load -> save round-trips bit exactly.
# ---------------------------------------------------------------------------


def _format_float(x: float) -> str:
    return format(float(x), ".17g")


def _format_nested(arr: np.ndarray) -> str:
    if arr.ndim == 1:
        return "[" + ", ".join(_format_float(v) for v in arr) + "]"
    return "[" + ", ".join(_format_nested(sub) for sub in arr) + "]"


def dumps_channel(law: ChannelLaw) -> str:
    alph = ", ".join(
        f'"{k}": {c}' for k, c in zip(_ALPHABET_KEYS, law.alphabets.cards)
    )
    return (
        "{\n"
        f'  "alphabets": {{{alph}}},\n'
        f'  "transition": {_format_nested(law.transition)}\n'
        "}\n"
    )


def loads_channel(text: str, cell_limit: int = DEFAULT_CELL_LIMIT) -> ChannelLaw:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelDataError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ChannelDataError("top-level JSON value must be an object")
    for field in ("alphabets", "transition"):
        if field not in doc:
            raise ChannelDataError(f"missing field {field!r}")
    alph = doc["alphabets"]
    if not isinstance(alph, dict) or set(alph) != set(_ALPHABET_KEYS):
        raise ChannelDataError(f'"alphabets" must have exactly the keys {_ALPHABET_KEYS}')
    spec = AlphabetSpec(*(alph[k] for k in _ALPHABET_KEYS))
    try:
        tensor = np.asarray(doc["transition"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ChannelDataError(f"transition is not a rectangular numeric array: {exc}") from exc
    if tensor.shape != spec.cards:
        raise ChannelDataError(
            f"transition shape {tensor.shape} does not match alphabets {spec.cards}"
        )
    return ChannelLaw(spec, tensor, cell_limit=cell_limit)


def save_channel(law: ChannelLaw, path: str | Path) -> None:
    Path(path).write_text(dumps_channel(law), encoding="ascii")


def load_channel(path: str | Path, cell_limit: int = DEFAULT_CELL_LIMIT) -> ChannelLaw:
    law = loads_channel(Path(path).read_text(encoding="ascii"), cell_limit=cell_limit)
    validate_channel(law)
    return law


def channel_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
