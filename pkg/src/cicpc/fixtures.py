"""Canonical test channels.

These small binary channels exercise every structural class the classifiers
and region evaluators care about; they are also shipped as JSON files under
channels/ for the CLI.
"""
from __future__ import annotations

import numpy as np

from .channel_model import AlphabetSpec, ChannelLaw


def _law_from_map(alphabets: AlphabetSpec, fill) -> ChannelLaw:
    t = np.zeros(alphabets.cards)
    for x1 in range(alphabets.card_x1):
        for x2 in range(alphabets.card_x2):
            for r in range(alphabets.card_xr1):
                fill(t, x1, x2, r)
    return ChannelLaw(alphabets, t)


def noiseless() -> ChannelLaw:
    """CH-NOISELESS: y1 = x1 and y2 = x2, two clean parallel bit pipes."""

    def fill(t, x1, x2, r):
        t[x1, x2, r, x1, x2] = 1.0

    return _law_from_map(AlphabetSpec(2, 2, 2, 2, 2), fill)


def degraded_xor(flip: float = 0.1) -> ChannelLaw:
    """CH-DEG: y1 = x1^x2^xr1, y2 = y1 through a binary symmetric flip."""

    def fill(t, x1, x2, r):
        y1 = x1 ^ x2 ^ r
        t[x1, x2, r, y1, y1] = 1.0 - flip
        t[x1, x2, r, y1, y1 ^ 1] = flip

    return _law_from_map(AlphabetSpec(2, 2, 2, 2, 2), fill)


def semidet_4ary(flip: float = 0.1) -> ChannelLaw:
    """CH-SD: y1 = 2*(x1^x2) + x2 over a 4-ary alphabet, y2 = (x2^xr1) flipped."""

    def fill(t, x1, x2, r):
        y1 = 2 * (x1 ^ x2) + x2
        y2 = x2 ^ r
        t[x1, x2, r, y1, y2] = 1.0 - flip
        t[x1, x2, r, y1, y2 ^ 1] = flip

    return _law_from_map(AlphabetSpec(2, 2, 2, 4, 2), fill)


def semidet_inert_y2(seed: int = 0) -> ChannelLaw:
    """Seeded semideterministic channel whose y2 is noise independent of the inputs.

    y1 = x1 ^ m(x2, xr1) for a seeded mask m, so destination 1 always sees a
    clean bit from the cognitive source; y2 carries no information, which makes
    the more-capable condition hold with margin exactly zero.
    """
    rng = np.random.default_rng(seed)
    mask = rng.integers(0, 2, size=(2, 2))
    q = float(rng.uniform(0.2, 0.8))

    def fill(t, x1, x2, r):
        y1 = x1 ^ int(mask[x2, r])
        t[x1, x2, r, y1, 0] = 1.0 - q
        t[x1, x2, r, y1, 1] = q

    return _law_from_map(AlphabetSpec(2, 2, 2, 2, 2), fill)


def random_binary(seed: int) -> ChannelLaw:
    """Fully random binary channel: each conditional slice drawn Dirichlet(1)."""
    rng = np.random.default_rng(seed)
    raw = rng.gamma(1.0, size=(2, 2, 2, 2, 2))
    t = raw / raw.sum(axis=(3, 4), keepdims=True)
    return ChannelLaw(AlphabetSpec(2, 2, 2, 2, 2), t)


def y2_constant() -> ChannelLaw:
    """Binary channel with y1 = x1 and y2 pinned to 0."""

    def fill(t, x1, x2, r):
        t[x1, x2, r, x1, 0] = 1.0

    return _law_from_map(AlphabetSpec(2, 2, 2, 2, 2), fill)


CANONICAL = {
    "ch_noiseless": noiseless,
    "ch_deg": degraded_xor,
    "ch_sd": semidet_4ary,
}
