"""Domain types and exact expected payoffs for allocation games with one
informed and one uninformed player.

The informed player observes which row of the valuation matrix is realized
(one type per state); the uninformed player knows only the prior.  Payoffs
are evaluated battlefield by battlefield as ``E[sgn(x_a - x_b)]`` under
independent draws from the two marginals, with ties worth zero.  All
integrals over atom/segment mixtures are done in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import InvalidDistributionError, PiecewiseCdf

MASS_TOL = 1e-12


class OutOfRegimeError(ValueError):
    """Parameters outside the regime where a result applies."""


class UnsupportedCaseError(ValueError):
    """A case the closed-form constructions deliberately do not cover."""


@dataclass(frozen=True)
class ValuationMatrix:
    """State-by-battlefield values: ``values[i][j]`` is what battlefield j
    pays the winner when state i is realized.  All entries positive."""

    values: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(float(v) for v in row) for row in self.values)
        object.__setattr__(self, "values", rows)
        if not rows or not rows[0]:
            raise ValueError("valuation matrix must be nonempty")
        width = len(rows[0])
        for row in rows:
            if len(row) != width:
                raise ValueError("valuation matrix rows have unequal lengths")
            if any(v <= 0.0 for v in row):
                raise ValueError("valuations must be strictly positive")

    @property
    def m(self):
        return len(self.values)

    @property
    def n(self):
        return len(self.values[0])

    def as_array(self):
        return np.asarray(self.values)

    @staticmethod
    def symmetric_pair(vbar, vlow):
        """2x2 matrix with (vbar, vlow) on the diagonal pattern, rows
        normalized to sum to one."""
        if not vbar > vlow > 0.0:
            raise ValueError(f"need vbar > vlow > 0, got {vbar}, {vlow}")
        s = vbar + vlow
        return ValuationMatrix(((vbar / s, vlow / s), (vlow / s, vbar / s)))

    @staticmethod
    def cyclic(alpha, beta):
        """3x3 matrix whose rows are cyclic shifts of (1, alpha, beta),
        each normalized to sum to one."""
        if not 1.0 > alpha >= beta > 0.0:
            raise ValueError(f"need 1 > alpha >= beta > 0, got {alpha}, {beta}")
        c = 1.0 / (1.0 + alpha + beta)
        base = (1.0, alpha, beta)
        rows = tuple(
            tuple(c * base[(j - i) % 3] for j in range(3)) for i in range(3)
        )
        return ValuationMatrix(rows)


@dataclass(frozen=True)
class Prior:
    """Probability vector over states."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        object.__setattr__(self, "weights", w)
        if not w or any(v <= 0.0 for v in w):
            raise ValueError("prior weights must be strictly positive")
        if abs(sum(w) - 1.0) > MASS_TOL:
            raise ValueError(f"prior weights sum to {sum(w)!r}, not 1")

    @property
    def m(self):
        return len(self.weights)

    @staticmethod
    def uniform(m):
        return Prior((1.0 / m,) * m)


@dataclass(frozen=True)
class Budgets:
    """Force budgets; ``gamma`` is the informed player's relative strength.

    Equality of the two budgets (gamma = 1) is meaningful only for the
    Lotto game; the two-battlefield Blotto results need gamma < 1.
    """

    informed: float
    uninformed: float

    def __post_init__(self):
        object.__setattr__(self, "informed", float(self.informed))
        object.__setattr__(self, "uninformed", float(self.uninformed))
        if not 0.0 < self.informed <= self.uninformed:
            raise ValueError(
                f"budgets must satisfy 0 < X_I <= X_U, got {self.informed}, {self.uninformed}"
            )

    @property
    def gamma(self):
        return self.informed / self.uninformed


@dataclass(frozen=True)
class StrategyProfile:
    """Marginal allocation distributions: one per battlefield for each
    informed type, and one per battlefield for the uninformed player."""

    informed: tuple[tuple[PiecewiseCdf, ...], ...]
    uninformed: tuple[PiecewiseCdf, ...]

    def __post_init__(self):
        informed = tuple(tuple(row) for row in self.informed)
        uninformed = tuple(self.uninformed)
        object.__setattr__(self, "informed", informed)
        object.__setattr__(self, "uninformed", uninformed)
        if not informed or not uninformed:
            raise ValueError("profile must contain strategies for both players")
        n = len(uninformed)
        for row in informed:
            if len(row) != n:
                raise ValueError("informed marginals do not match battlefield count")

    @property
    def m(self):
        return len(self.informed)

    @property
    def n(self):
        return len(self.uninformed)

    def to_dict(self):
        return {
            "informed": [[f.to_dict() for f in row] for row in self.informed],
            "uninformed": [f.to_dict() for f in self.uninformed],
        }

    @staticmethod
    def from_dict(data):
        try:
            informed = tuple(
                tuple(PiecewiseCdf.from_dict(f) for f in row)
                for row in data["informed"]
            )
            uninformed = tuple(PiecewiseCdf.from_dict(f) for f in data["uninformed"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"bad strategy profile record: {exc}") from exc
        return StrategyProfile(informed=informed, uninformed=uninformed)


# ---------------------------------------------------------------------------
# Exact payoff evaluation
# ---------------------------------------------------------------------------


def _clamp_integral(la, ra, lb, rb):
    # integral over [la, ra] of clamp(x - lb, 0, rb - lb) dx
    def g(x):
        lo = max(x - lb, 0.0)
        hi = max(x - rb, 0.0)
        return 0.5 * (lo * lo - hi * hi)

    return g(ra) - g(la)


def battlefield_payoff(f_a: PiecewiseCdf, f_b: PiecewiseCdf) -> float:
    """E[sgn(x_a - x_b)] = P(a wins) - P(b wins) under independent draws.

    Coinciding atoms tie and contribute zero.  Exact closed form over all
    atom/segment component pairs.
    """
    total = 0.0
    for xa, ma in f_a.atoms:
        for xb, mb in f_b.atoms:
            if xa > xb:
                total += ma * mb
            elif xa < xb:
                total -= ma * mb
        for lb, rb, rho in f_b.segments:
            w = min(max(xa, lb), rb)
            total += ma * rho * (2.0 * w - lb - rb)
    for la, ra, rho_a in f_a.segments:
        for xb, mb in f_b.atoms:
            w = min(max(xb, la), ra)
            total -= mb * rho_a * (2.0 * w - la - ra)
        for lb, rb, rho_b in f_b.segments:
            below = _clamp_integral(la, ra, lb, rb)
            total += rho_a * rho_b * (2.0 * below - (rb - lb) * (ra - la))
    return total


def _check_dimensions(profile: StrategyProfile, values: ValuationMatrix, prior: Prior):
    if profile.m != values.m or prior.m != values.m:
        raise ValueError(
            f"state counts disagree: profile {profile.m}, values {values.m}, prior {prior.m}"
        )
    if profile.n != values.n:
        raise ValueError(
            f"battlefield counts disagree: profile {profile.n}, values {values.n}"
        )


def interim_payoff(
    profile: StrategyProfile, values: ValuationMatrix, prior: Prior, state: int
) -> float:
    """Informed player's expected payoff conditional on state ``state``."""
    _check_dimensions(profile, values, prior)
    if not 0 <= state < values.m:
        raise ValueError(f"state index {state} out of range [0, {values.m})")
    row = values.values[state]
    marginals = profile.informed[state]
    return sum(
        row[j] * battlefield_payoff(marginals[j], profile.uninformed[j])
        for j in range(values.n)
    )


def ex_ante_payoff(
    profile: StrategyProfile, values: ValuationMatrix, prior: Prior
) -> float:
    """Informed player's ex-ante expected payoff (prior-weighted interim
    payoffs).  The game is zero-sum: the uninformed player gets the negative."""
    _check_dimensions(profile, values, prior)
    return sum(
        prior.weights[i] * interim_payoff(profile, values, prior, i)
        for i in range(values.m)
    )


def expected_budget(marginals) -> float:
    """Total expected allocation of a list of per-battlefield marginals."""
    return sum(f.mean() for f in marginals)
