"""Numerical tests of the channel-class conditions and structural identities.

The "for all distributions" conditions are checked by bounded multistart
minimization of the corresponding information gap: a negative witness proves
violation, while exhausting the budget without one is reported as satisfied
(with the explored budget attached, never as a proof).  Degenerate inputs
always pin the gap at zero, so satisfaction is read non-strictly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import ChannelClassError
from .channel_model import ChannelLaw, classify_semideterministic
from .distributions import AuxCardinalities, OuterWitness, build_outer_joint
from .info_measures import JointPmf, conditional_entropy, conditional_mutual_information
from .region_builder import SearchConfig
from .search import GapEngine, multistart_climb

MARGIN_TOL = 1e-9


@dataclass(frozen=True)
class ConditionVerdict:
    condition: str
    status: str  # "satisfied" | "violated" | "inconclusive"
    margin_bits: float  # smallest gap found over the search budget
    witness: np.ndarray | None  # input joint p(v,x1,x2,xr1) at the margin
    samples_used: int
    restarts: int
    aux: AuxCardinalities


def _minimize_gap(law: ChannelLaw, condition: str, cfg: SearchConfig) -> ConditionVerdict:
    cards = cfg.resolve_aux(law)
    engine = GapEngine(law, condition, cards)
    result = multistart_climb(
        lambda thetas: -engine.gaps(thetas),
        engine.layout,
        restarts=cfg.restarts,
        steps=cfg.local_steps,
        step_scale=cfg.step_scale,
        seed=cfg.seed,
        structured=engine.structured,
    )
    best = int(np.argmax(result.values))
    margin = -float(result.values[best])
    witness = engine.input_joints(result.thetas[best])[0]
    status = "violated" if margin < -MARGIN_TOL else "satisfied"
    return ConditionVerdict(
        condition=condition,
        status=status,
        margin_bits=margin,
        witness=witness,
        samples_used=result.evaluations,
        restarts=cfg.restarts,
        aux=cards,
    )


def check_more_capable(law: ChannelLaw, cfg: SearchConfig) -> ConditionVerdict:
    """Minimize I(V,X2;Y1|Xr1) - I(V,X2,Xr1;Y2) over free input joints."""
    return _minimize_gap(law, "more-capable", cfg)


def check_high_gain(law: ChannelLaw, cfg: SearchConfig) -> tuple[ConditionVerdict, ConditionVerdict]:
    """The two per-term gaps whose sum equals the more-capable gap."""
    return (
        _minimize_gap(law, "high-gain-x2", cfg),
        _minimize_gap(law, "high-gain-v", cfg),
    )


def more_capable_decomposition_residual(joint: JointPmf) -> float:
    """|combined gap - (x2 term + v term)|, an exact chain-rule identity.

    Must vanish (within 1e-9) for every joint over (V,X1,X2,Xr1,Y1,Y2); this
    is what makes the high-gain pair of conditions imply more capability.
    """
    mi = conditional_mutual_information
    g_combined = mi(joint, ("V", "X2"), "Y1", "Xr1") - mi(joint, ("V", "X2", "Xr1"), "Y2")
    g_x2 = mi(joint, "X2", "Y1", "Xr1") - mi(joint, ("X2", "Xr1"), "Y2")
    g_v = mi(joint, "V", "Y1", ("X2", "Xr1")) - mi(joint, "V", "Y2", ("X2", "Xr1"))
    return abs(g_combined - g_x2 - g_v)


def semidet_collapse_deviation(law: ChannelLaw, witness: OuterWitness) -> float:
    """|H(Y2|V,T,X1,X2,Xr1) - H(Y2|X1,X2,Xr1)| on the outer joint.

    On a semideterministic channel this must vanish for every witness: the
    auxiliaries carry no extra information about Y2 beyond the inputs, so the
    upper and lower bounds share one Markov structure.
    """
    rep = classify_semideterministic(law)
    if not rep.semideterministic:
        raise ChannelClassError(
            f"channel is not semideterministic: deviation {rep.max_deviation:.3e}"
        )
    joint = build_outer_joint(witness, law)
    h_aux = conditional_entropy(joint, "Y2", ("V", "T", "X1", "X2", "Xr1"))
    h_inp = conditional_entropy(joint, "Y2", ("X1", "X2", "Xr1"))
    return abs(h_aux - h_inp)
