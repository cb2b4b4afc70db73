"""Frontier computation: scalarized multistart search over witness logits.

A theorem's rate region is a union of cap polytopes over witness
distributions.  For each weight mu on the grid the climber maximizes the
polytope support mu*R1 + (1-mu)*R2; the frontier merges the vertices of every
best polytope and Pareto-filters them.  All randomness is derived from the
config seed per restart, so serial and parallel runs agree exactly.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .bounds import (
    ChannelClassError,
    RatePolytope,
    active_constraints,
)
from .channel_model import ChannelLaw, classify_degraded, classify_semideterministic
from .distributions import AuxCardinalities
from .search import (
    BoundEngine,
    block_ranges,
    caps_support,
    caps_vertex,
    climb_rows,
    initial_logits,
    restart_rng,
)

THREADS_ENV = "CICPC_THREADS"


@dataclass(frozen=True)
class SearchConfig:
    mu_grid_size: int = 21
    restarts: int = 32
    local_steps: int = 400
    step_scale: float = 1.0
    seed: int = 0
    aux: AuxCardinalities | None = None  # None: min(4, |X1||X2||Xr1|) each
    pareto_tol: float = 1e-9
    hull: bool = False
    threads: int | None = None  # None: CICPC_THREADS env var, else 1

    def __post_init__(self) -> None:
        if self.mu_grid_size < 2:
            raise ValueError("mu_grid_size must be >= 2 so the grid has both endpoints")
        for name in ("restarts", "local_steps"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    def resolve_aux(self, law: ChannelLaw) -> AuxCardinalities:
        return self.aux if self.aux is not None else AuxCardinalities.default_for(law.alphabets)

    def resolve_threads(self) -> int:
        if self.threads is not None:
            return max(1, self.threads)
        return max(1, int(os.environ.get(THREADS_ENV, "1") or "1"))

    def mu_grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.mu_grid_size)


@dataclass(frozen=True)
class Witness:
    """Logit vector (with its provenance) that instantiates one polytope."""

    theorem: str
    theta: np.ndarray
    aux: AuxCardinalities
    restart: int


@dataclass(frozen=True)
class RatePoint:
    r1: float
    r2: float
    mu: float | None = None
    witness: object = None  # Witness for searched points, grid counts for oracle points
    value: float | None = None
    polytope: RatePolytope | None = None
    vector: object = None
    active_constraint: str = ""


@dataclass(frozen=True)
class FrontierMetadata:
    theorem: str
    aux: AuxCardinalities | None
    seed: int | None
    restarts: int
    local_steps: int
    mu_grid: tuple[float, ...]
    hull: bool
    pareto_tol: float
    source: str = "search"
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Frontier:
    points: tuple[RatePoint, ...]
    metadata: FrontierMetadata

    def support(self, mu: float) -> float:
        if not self.points:
            return -np.inf
        return max(mu * p.r1 + (1.0 - mu) * p.r2 for p in self.points)


def polytope_support(poly: RatePolytope, mu: float) -> tuple[float, RatePoint | None]:
    """Max of mu*R1 + (1-mu)*R2 over the polytope by vertex enumeration.

    Ties are broken toward larger R1; an empty polytope yields (-inf, None).
    """
    if poly.is_empty:
        return (-np.inf, None)
    value, r1, r2 = caps_vertex(
        np.array([poly.r1_cap, poly.r2_cap, poly.sum_cap]), mu
    )
    point = RatePoint(
        r1=r1, r2=r2, mu=mu, polytope=poly,
        active_constraint=active_constraints(poly, r1, r2),
    )
    return (value, point)


@dataclass(frozen=True)
class GateReport:
    """Outcome of the channel-class checks a theorem requires."""

    theorem: str
    checks: dict


def require_theorem_applies(law: ChannelLaw, theorem: str, cfg: SearchConfig) -> GateReport:
    """Raise ChannelClassError unless the channel is in the theorem's class.

    t3 needs a degraded channel; t4 needs a semideterministic channel whose
    more-capable check (run with this config's budget) is not violated.
    """
    checks: dict = {}
    if theorem == "t3":
        rep = classify_degraded(law)
        checks["degraded"] = rep.degraded
        if not rep.degraded:
            raise ChannelClassError(
                f"channel is not degraded: factorization deviation {rep.max_deviation:.3e}"
            )
    elif theorem == "t4":
        rep = classify_semideterministic(law)
        checks["semideterministic"] = rep.semideterministic
        if not rep.semideterministic:
            raise ChannelClassError(
                f"channel is not semideterministic: deviation {rep.max_deviation:.3e}"
            )
        from .condition_checkers import check_more_capable

        verdict = check_more_capable(law, cfg)
        checks["more_capable"] = verdict.status
        checks["more_capable_margin_bits"] = verdict.margin_bits
        if verdict.status == "violated":
            raise ChannelClassError(
                f"channel is not more capable: margin {verdict.margin_bits:.6f} bits"
            )
    elif theorem not in ("t1", "t2"):
        raise ValueError(f"unknown theorem id {theorem!r}")
    return GateReport(theorem=theorem, checks=checks)


def _climb_directions(
    engine: BoundEngine,
    mus: list[float],
    cfg: SearchConfig,
    inits: list[list[np.ndarray]] | None = None,
) -> list[RatePoint]:
    """One climb covering every mu in the chunk; restart r reuses the same
    random stream in every mu block, so results match per-mu runs exactly.

    When `inits` is given (one list of logit vectors per mu, all the same
    length) those rows are climbed instead of the standard restarts, with
    random streams indexed past the standard ones.
    """
    nmu = len(mus)
    if inits is None:
        nr = cfg.restarts
        rngs = [restart_rng(cfg.seed, k % nr) for k in range(nmu * nr)]
        thetas0 = np.stack(
            [
                initial_logits(engine.layout, rng, k % nr, engine.structured)
                for k, rng in enumerate(rngs)
            ]
        )
    else:
        nr = len(inits[0])
        rngs = [restart_rng(cfg.seed, cfg.restarts + (k % nr)) for k in range(nmu * nr)]
        thetas0 = np.stack([theta for per_mu in inits for theta in per_mu])
    mu_vec = np.repeat(np.asarray(mus, dtype=np.float64), nr)
    result = climb_rows(
        lambda thetas: caps_support(engine.caps(thetas), mu_vec),
        thetas0,
        rngs,
        steps=cfg.local_steps,
        step_scale=cfg.step_scale,
        blocks=block_ranges(engine.layout),
    )
    points = []
    for i, mu in enumerate(mus):
        block = result.values[i * nr:(i + 1) * nr]
        best = int(np.argmax(block))  # ties resolve to the lowest restart
        theta = result.thetas[i * nr + best]
        caps = engine.caps(theta)[0]
        value, r1, r2 = caps_vertex(caps, mu)
        poly = RatePolytope(float(caps[0]), float(caps[1]), float(caps[2]))
        points.append(
            RatePoint(
                r1=r1,
                r2=r2,
                mu=mu,
                witness=Witness(engine.theorem, theta, engine.cards, best),
                value=value,
                polytope=poly,
                vector=engine.vector(theta),
                active_constraint=active_constraints(poly, r1, r2) if not poly.is_empty else "",
            )
        )
    return points


def maximize_direction(law: ChannelLaw, theorem: str, mu: float, cfg: SearchConfig) -> RatePoint:
    """Best supporting point of the theorem's region in direction mu."""
    require_theorem_applies(law, theorem, cfg)
    engine = BoundEngine(law, theorem, cfg.resolve_aux(law))
    return _climb_directions(engine, [float(mu)], cfg)[0]


def pareto_filter(points: list[RatePoint], tol: float = 1e-9) -> list[RatePoint]:
    """Pareto-maximal staircase; points tied within tol are merged."""
    kept: list[RatePoint] = []
    for p in sorted(points, key=lambda q: (-q.r1, -q.r2)):
        if kept and (p.r2 <= kept[-1].r2 + tol or p.r1 >= kept[-1].r1 - tol):
            continue
        kept.append(p)
    kept.reverse()
    return kept


def upper_concave_envelope(points: list[RatePoint], tol: float = 1e-9) -> list[RatePoint]:
    """Drop points on or below a chord of their neighbors (time-sharing hull)."""
    if len(points) <= 2:
        return list(points)
    hull: list[RatePoint] = []
    for p in points:  # already sorted by r1 ascending
        while len(hull) >= 2:
            o, m = hull[-2], hull[-1]
            cross = (p.r1 - o.r1) * (m.r2 - o.r2) - (p.r2 - o.r2) * (m.r1 - o.r1)
            if cross <= tol:  # m not strictly above chord o -> p
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _chunked_directions(
    engine: BoundEngine,
    mus: list[float],
    cfg: SearchConfig,
    inits: list[list[np.ndarray]] | None = None,
) -> list[RatePoint]:
    threads = cfg.resolve_threads()
    if threads <= 1 or len(mus) == 1:
        return _climb_directions(engine, mus, cfg, inits)
    idx_chunks = [c for c in np.array_split(np.arange(len(mus)), min(threads, len(mus))) if len(c)]
    tasks = [
        ([mus[i] for i in c], None if inits is None else [inits[i] for i in c])
        for c in idx_chunks
    ]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        chunks = list(pool.map(lambda t: _climb_directions(engine, t[0], cfg, t[1]), tasks))
    return [p for chunk in chunks for p in chunk]


def compute_frontier(law: ChannelLaw, theorem: str, cfg: SearchConfig) -> Frontier:
    """Sweep the mu grid, merge every best polytope's vertices, Pareto-filter.

    A second polish pass re-climbs each mu from the sweep's global best and
    its grid neighbors' best witnesses, which evens out directions where the
    first pass straggles.  Both passes are deterministic in the seed and
    independent of the thread count.
    """
    gate = require_theorem_applies(law, theorem, cfg)
    engine = BoundEngine(law, theorem, cfg.resolve_aux(law))
    mus = [float(m) for m in cfg.mu_grid()]
    results = _chunked_directions(engine, mus, cfg)
    all_results = list(results)
    if len(mus) > 1:
        star = int(np.argmax([r.value for r in results]))
        thetas = [r.witness.theta for r in results]
        inits = [
            [thetas[star], thetas[max(i - 1, 0)], thetas[min(i + 1, len(mus) - 1)]]
            for i in range(len(mus))
        ]
        polished = _chunked_directions(engine, mus, cfg, inits)
        all_results.extend(polished)
    candidates: list[RatePoint] = []
    for res in all_results:
        poly = res.polytope
        if poly is None or poly.is_empty:
            continue
        for vx, vy in poly.vertices():
            candidates.append(
                RatePoint(
                    r1=vx,
                    r2=vy,
                    mu=res.mu,
                    witness=res.witness,
                    active_constraint=active_constraints(poly, vx, vy),
                )
            )
    if not candidates:
        candidates = [RatePoint(r1=0.0, r2=0.0, mu=None, active_constraint="origin")]
    points = pareto_filter(candidates, cfg.pareto_tol)
    if cfg.hull:
        points = upper_concave_envelope(points, cfg.pareto_tol)
    meta = FrontierMetadata(
        theorem=theorem,
        aux=cfg.resolve_aux(law),
        seed=cfg.seed,
        restarts=cfg.restarts,
        local_steps=cfg.local_steps,
        mu_grid=tuple(float(m) for m in mus),
        hull=cfg.hull,
        pareto_tol=cfg.pareto_tol,
        source="search",
        extra={"gate": gate.checks, "step_scale": cfg.step_scale},
    )
    return Frontier(points=tuple(points), metadata=meta)


def frontier_gap(inner: Frontier, outer: Frontier) -> float:
    """Max over the mu grid of support(inner) - support(outer).

    A value <= 0 certifies (up to scalarization) that the inner frontier sits
    inside the outer one.  Mismatched grids are handled by taking the union of
    the two grids; supports are evaluated exactly from the stored points.
    """
    mus = sorted(set(inner.metadata.mu_grid) | set(outer.metadata.mu_grid))
    if not mus:
        mus = list(np.linspace(0.0, 1.0, 21))
    return max(inner.support(mu) - outer.support(mu) for mu in mus)
