"""Closed-form absorbing/encounter probabilities and their Monte Carlo checks.

Two one-dimensional walk families back the convergence story of the particle
model: a single walker absorbed at the origin, and a pair of walkers whose
difference behaves like a single walker on a doubled lattice. Closed forms
are verified empirically against the simulators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# retire a drifting-away walker once its return probability is below this
ESCAPE_TOLERANCE = 1e-12


@dataclass
class LineWalkSpec:
    """Walker on the non-negative integers, absorbed at 0.

    Steps +1 with probability p, -1 with q, stays with r; starts at l.
    """

    p: float
    q: float
    r: float = 0.0
    l: int = 1

    def __post_init__(self):
        if self.p <= 0 or self.q <= 0 or self.r < 0:
            raise ValueError("p and q must be strictly positive, r non-negative")
        if abs(self.p + self.q + self.r - 1.0) > 1e-12:
            raise ValueError("p + q + r must sum to 1")
        if self.l < 0:
            raise ValueError("start position must be non-negative")


@dataclass
class PairWalkSpec:
    """Two independent walkers on the integers with an encounter tolerance eta."""

    pa: float
    qa: float
    pb: float
    qb: float
    j: int = 0
    k: int = 0
    eta: int = 1

    def __post_init__(self):
        for p, q in ((self.pa, self.qa), (self.pb, self.qb)):
            if p <= 0 or q <= 0 or abs(p + q - 1.0) > 1e-12:
                raise ValueError("step probabilities must be positive and sum to 1")
        if self.k < self.j:
            raise ValueError("expected k >= j")
        if self.eta < 1:
            raise ValueError("eta must be a positive integer")

    @property
    def gap(self) -> int:
        return self.k - self.j


@dataclass
class MCEstimate:
    estimate: float
    stderr: float
    trials: int
    unresolved: int = 0  # trials still in flight at the horizon (downward bias)

    @property
    def upper_estimate(self) -> float:
        """Estimate if every truncated trial had been absorbed.

        [estimate, upper_estimate] brackets the infinite-horizon probability,
        since each unresolved trial contributes an unknown 0 or 1.
        """
        return self.estimate + self.unresolved / self.trials

    def agrees_with(self, value: float, n_sigma: float = 3.0, floor: float = 0.0) -> bool:
        return abs(self.estimate - value) <= max(floor, n_sigma * self.stderr)

    def brackets(self, value: float, n_sigma: float = 3.0, floor: float = 0.0) -> bool:
        """True when value lies within tolerance of the truncation bracket."""
        tol = max(floor, n_sigma * self.stderr)
        return self.estimate - tol <= value <= self.upper_estimate + tol


def absorbing_probability(spec: LineWalkSpec) -> float:
    """(q/p)^l when the walk drifts away from the origin, otherwise 1.

    The stay probability r only rescales time and does not affect the result.
    """
    if spec.l == 0:
        return 1.0
    if spec.p > spec.q:
        return (spec.q / spec.p) ** spec.l
    return 1.0


def _binomial_stderr(successes: int, trials: int) -> float:
    frac = successes / trials
    return math.sqrt(max(frac * (1.0 - frac), 0.0) / trials)


def _escape_cutoff(p: float, q: float, step: int = 1) -> int | None:
    """Position beyond which eventual return is less likely than ESCAPE_TOLERANCE."""
    if p <= q:
        return None
    per_unit = (q / p) ** (1.0 / step)
    return int(math.ceil(math.log(ESCAPE_TOLERANCE) / math.log(per_unit)))


def _simulate_absorption(start: int, down: float, up: float, stay: float,
                         absorb_at: int, step: int, trials: int, horizon: int,
                         rng: np.random.Generator) -> MCEstimate:
    """Shared absorption loop; `step` is the lattice unit (1 or 2 for the pair walk)."""
    if start <= absorb_at:
        return MCEstimate(estimate=1.0, stderr=0.0, trials=trials)
    cutoff = _escape_cutoff(up, down, step)
    pos = np.full(trials, start, dtype=np.int64)
    absorbed = 0
    escaped = 0
    for _ in range(horizon):
        if pos.size == 0:
            break
        u = rng.random(pos.size)
        pos = pos + step * ((u < up).astype(np.int64) - (u >= up + stay).astype(np.int64))
        hit = pos <= absorb_at
        absorbed += int(hit.sum())
        alive = ~hit
        if cutoff is not None:
            gone = alive & (pos >= absorb_at + cutoff)
            escaped += int(gone.sum())
            alive &= ~gone
        pos = pos[alive]
    unresolved = pos.size
    return MCEstimate(estimate=absorbed / trials,
                      stderr=_binomial_stderr(absorbed, trials),
                      trials=trials, unresolved=unresolved)


def simulate_line_walk(spec: LineWalkSpec, trials: int = 100_000,
                       horizon: int = 10_000,
                       rng: np.random.Generator | None = None) -> MCEstimate:
    """Fraction of walks absorbed at the origin within the horizon.

    Horizon truncation biases the estimate downward; the `unresolved` count
    reports how many walks were cut off. Walks that drift beyond the point
    where return probability is below ESCAPE_TOLERANCE are retired early as
    unabsorbed.
    """
    if trials < 1 or horizon < 1:
        raise ValueError("trials and horizon must be positive")
    rng = rng if rng is not None else np.random.default_rng()
    return _simulate_absorption(start=spec.l, down=spec.q, up=spec.p, stay=spec.r,
                                absorb_at=0, step=1, trials=trials,
                                horizon=horizon, rng=rng)


def z_walk_transitions(spec: PairWalkSpec) -> tuple[float, float, float]:
    """Step distribution of the difference walk: (gap-2, stay, gap+2)."""
    toward = spec.pa * spec.qb
    stay = spec.pa * spec.pb + spec.qa * spec.qb
    away = spec.qa * spec.pb
    return toward, stay, away


def encounter_probability(spec: PairWalkSpec) -> float:
    """Probability the two walkers ever come within eta of each other.

    The difference walk moves on a lattice of unit 2, so the effective start
    is measured in double steps: gap // 2 when eta = 1 (odd gaps are absorbed
    at distance 1). The exponent convention was fixed against the Monte Carlo
    simulator.
    """
    toward, _, away = z_walk_transitions(spec)
    z_steps = max(spec.gap - spec.eta + 1, 0) // 2 if spec.gap > spec.eta else 0
    if z_steps == 0:
        return 1.0
    if away > toward:
        return (toward / away) ** z_steps
    return 1.0


@dataclass
class PairWalkEstimates:
    direct: MCEstimate
    composed: MCEstimate

    @property
    def combined_stderr(self) -> float:
        return math.hypot(self.direct.stderr, self.composed.stderr)


def _simulate_pair_direct(spec: PairWalkSpec, trials: int, horizon: int,
                          rng: np.random.Generator) -> MCEstimate:
    gap = np.full(trials, spec.gap, dtype=np.int64)
    if spec.gap <= spec.eta:
        return MCEstimate(estimate=1.0, stderr=0.0, trials=trials)
    toward, _, away = z_walk_transitions(spec)
    cutoff = _escape_cutoff(away, toward, 2)
    met = 0
    escaped = 0
    for _ in range(horizon):
        if gap.size == 0:
            break
        step_a = np.where(rng.random(gap.size) < spec.pa, 1, -1)
        step_b = np.where(rng.random(gap.size) < spec.pb, 1, -1)
        gap = gap + step_b - step_a  # gap = B - A with B starting ahead
        hit = np.abs(gap) <= spec.eta
        met += int(hit.sum())
        alive = ~hit
        if cutoff is not None:
            gone = alive & (gap >= spec.eta + cutoff)
            escaped += int(gone.sum())
            alive &= ~gone
        gap = gap[alive]
    return MCEstimate(estimate=met / trials, stderr=_binomial_stderr(met, trials),
                      trials=trials, unresolved=gap.size)


def simulate_pair_walk(spec: PairWalkSpec, trials: int = 100_000,
                       horizon: int = 10_000,
                       rng: np.random.Generator | None = None,
                       check_sigma: float = 6.0) -> PairWalkEstimates:
    """Encounter probability estimated two ways: both walkers, and the difference walk.

    The two estimators target the same quantity; a gap beyond ``check_sigma``
    combined standard errors (plus a small allowance for zero-variance
    corners) raises, since it indicates a broken composition.
    """
    if trials < 1 or horizon < 1:
        raise ValueError("trials and horizon must be positive")
    rng = rng if rng is not None else np.random.default_rng()
    direct = _simulate_pair_direct(spec, trials, horizon, rng)
    toward, stay, away = z_walk_transitions(spec)
    composed = _simulate_absorption(start=spec.gap, down=toward, up=away, stay=stay,
                                    absorb_at=spec.eta, step=2, trials=trials,
                                    horizon=horizon, rng=rng)
    estimates = PairWalkEstimates(direct=direct, composed=composed)
    gap = abs(direct.estimate - composed.estimate)
    if gap > check_sigma * estimates.combined_stderr + 1e-3:
        raise RuntimeError(
            f"pair-walk estimators disagree: {direct.estimate:.4f} vs "
            f"{composed.estimate:.4f} (combined stderr {estimates.combined_stderr:.2e})")
    return estimates
