"""Three-battlefield General Lotto with cyclic valuations and an informed,
budget-poor player.

Rows of the valuation matrix are cyclic shifts of (1, alpha, beta), each
normalized by c = 1/(1+alpha+beta); the three states are equally likely.
The informed player's equilibrium payoff splits into three budget regimes,

    gamma in (0, 1/3]:   3*gamma*c - 1
    gamma in (1/3, 2/3]: c*[(1 - 1/(3g))*(3g*a + 1 - a) + 1] - 1
    gamma in (2/3, 1]:   c*[2 - 1/(3g) + a*(2 - 1/g) + 3bg*(1 - 2/(3g))^2] - 1

and in each regime the equilibrium marginals are explicit mixtures of an
atom at zero and uniform pieces, parametrized by Lagrange multipliers on
the expected-budget constraints (lambda_U = 3*gamma*lambda_I throughout).
The marginals decompose the game into independent per-battlefield all-pay
auctions, which is what the oracle module certifies; the payoff branches
above are exactly the values those marginals realize, agree at the regime
boundaries, and the mid and high branches coincide when beta = alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import PiecewiseCdf
from .games import (
    Budgets,
    OutOfRegimeError,
    Prior,
    StrategyProfile,
    ValuationMatrix,
    interim_payoff,
)

# atoms whose closed-form mass vanishes at a regime boundary are dropped
_ATOM_DROP_TOL = 5e-13

REGIMES = ("low", "mid", "high")


def _validate_shape(alpha, beta):
    if not 1.0 > alpha >= beta > 0.0:
        raise ValueError(f"need 1 > alpha >= beta > 0, got alpha={alpha}, beta={beta}")


def _validate_gamma(gamma):
    if not 0.0 < gamma <= 1.0:
        raise OutOfRegimeError(f"budget ratio {gamma} outside (0, 1]")


@dataclass(frozen=True)
class LottoParams:
    """Instance of the cyclic three-battlefield game."""

    alpha: float
    beta: float
    gamma: float
    budget_uninformed: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "budget_uninformed", float(self.budget_uninformed))
        _validate_shape(self.alpha, self.beta)
        _validate_gamma(self.gamma)
        if self.budget_uninformed <= 0.0:
            raise ValueError(f"budget must be positive, got {self.budget_uninformed}")

    @property
    def scale(self):
        """Row normalization constant c = 1/(1+alpha+beta)."""
        return 1.0 / (1.0 + self.alpha + self.beta)

    @property
    def budgets(self):
        return Budgets(self.gamma * self.budget_uninformed, self.budget_uninformed)

    @property
    def valuation_matrix(self):
        return ValuationMatrix.cyclic(self.alpha, self.beta)

    @property
    def prior(self):
        return Prior.uniform(3)


def regime_of(gamma) -> str:
    _validate_gamma(gamma)
    if gamma <= 1.0 / 3.0:
        return "low"
    if gamma <= 2.0 / 3.0:
        return "mid"
    return "high"


# ---------------------------------------------------------------------------
# Closed-form payoffs
# ---------------------------------------------------------------------------


def payoff_low_branch(alpha, beta, gamma):
    """Closed form valid on gamma in (0, 1/3]."""
    return 3.0 * gamma / (1.0 + alpha + beta) - 1.0


def payoff_mid_branch(alpha, beta, gamma):
    """Closed form valid on gamma in (1/3, 2/3]."""
    c = 1.0 / (1.0 + alpha + beta)
    bracket = (1.0 - 1.0 / (3.0 * gamma)) * (3.0 * gamma * alpha + 1.0 - alpha) + 1.0
    return c * bracket - 1.0


def payoff_high_branch(alpha, beta, gamma):
    """Closed form valid on gamma in (2/3, 1]."""
    c = 1.0 / (1.0 + alpha + beta)
    bracket = (
        2.0
        - 1.0 / (3.0 * gamma)
        + alpha * (2.0 - 1.0 / gamma)
        + 3.0 * beta * gamma * (1.0 - 2.0 / (3.0 * gamma)) ** 2
    )
    return c * bracket - 1.0


_BRANCHES = {
    "low": payoff_low_branch,
    "mid": payoff_mid_branch,
    "high": payoff_high_branch,
}


def informed_payoff(alpha, beta, gamma) -> float:
    """Equilibrium ex-ante payoff to the informed player."""
    _validate_shape(alpha, beta)
    return _BRANCHES[regime_of(gamma)](alpha, beta, gamma)


def complete_info_baseline(gamma) -> float:
    """Equilibrium payoff gamma - 1 of the budget-poor player when neither
    side observes the state."""
    _validate_gamma(gamma)
    return gamma - 1.0


# ---------------------------------------------------------------------------
# Multipliers and equilibrium marginals
# ---------------------------------------------------------------------------


def multipliers(alpha, beta, gamma, budget_uninformed=1.0) -> tuple[float, float]:
    """Unique budget-constraint multipliers (lambda_informed, lambda_uninformed)
    closing both expected-budget constraints in the current regime."""
    _validate_shape(alpha, beta)
    _validate_gamma(gamma)
    c = 1.0 / (1.0 + alpha + beta)
    regime = regime_of(gamma)
    if regime == "low":
        lam_i = c / budget_uninformed
    elif regime == "mid":
        lam_i = (c / budget_uninformed) * ((1.0 - alpha) / (9.0 * gamma**2) + alpha)
    else:
        lam_i = (c / budget_uninformed) * (
            beta + (1.0 + 3.0 * alpha - 4.0 * beta) / (9.0 * gamma**2)
        )
    return lam_i, 3.0 * gamma * lam_i


@dataclass(frozen=True)
class RegimeSolution:
    """Equilibrium marginals for one regime.

    ``f_diag`` is the informed marginal on the battlefield the realized state
    values at c, ``f_alpha``/``f_beta`` on the ones valued alpha*c / beta*c;
    the uninformed marginal is the same on every battlefield.
    """

    params: LottoParams
    regime: str
    lambda_informed: float
    lambda_uninformed: float
    f_uninformed: PiecewiseCdf
    f_diag: PiecewiseCdf
    f_alpha: PiecewiseCdf
    f_beta: PiecewiseCdf

    def informed_marginals(self, state: int) -> tuple[PiecewiseCdf, ...]:
        by_shift = (self.f_diag, self.f_alpha, self.f_beta)
        return tuple(by_shift[(j - state) % 3] for j in range(3))

    def profile(self) -> StrategyProfile:
        return StrategyProfile(
            informed=tuple(self.informed_marginals(i) for i in range(3)),
            uninformed=(self.f_uninformed,) * 3,
        )


def _with_zero_atom(mass, segments):
    atoms = ((0.0, mass),) if mass > _ATOM_DROP_TOL else ()
    return PiecewiseCdf(atoms=atoms, segments=segments)


def solve(params: LottoParams) -> RegimeSolution:
    """Construct the equilibrium marginals and multipliers for ``params``."""
    a, b, g = params.alpha, params.beta, params.gamma
    c = params.scale
    lam_i, lam_u = multipliers(a, b, g, params.budget_uninformed)
    regime = regime_of(g)

    if regime == "low":
        top = 2.0 * c / (3.0 * lam_i)
        f_u = PiecewiseCdf(segments=((0.0, top, 3.0 * lam_i / (2.0 * c)),))
        f_d = _with_zero_atom(
            1.0 - lam_u / lam_i, ((0.0, top, 3.0 * lam_u / (2.0 * c)),)
        )
        f_a = PiecewiseCdf.point(0.0)
        f_b = PiecewiseCdf.point(0.0)
    elif regime == "mid":
        lo = (2.0 * c / 3.0) * (a / lam_i - a / lam_u)
        hi = (2.0 * c / 3.0) * (a / lam_i + (1.0 - a) / lam_u)
        f_u = PiecewiseCdf(
            segments=(
                (0.0, lo, 3.0 * lam_i / (2.0 * a * c)),
                (lo, hi, 3.0 * lam_i / (2.0 * c)),
            )
        )
        f_d = PiecewiseCdf(segments=((lo, hi, 3.0 * lam_u / (2.0 * c)),))
        f_a = _with_zero_atom(
            2.0 - lam_u / lam_i, ((0.0, lo, 3.0 * lam_u / (2.0 * a * c)),)
        )
        f_b = PiecewiseCdf.point(0.0)
    else:
        t1 = (2.0 * c / 3.0) * (b / lam_i - 2.0 * b / lam_u)
        t2 = (2.0 * c / 3.0) * (b / lam_i + (a - 2.0 * b) / lam_u)
        t3 = t2 + (2.0 * c / 3.0) / lam_u
        f_u = PiecewiseCdf(
            segments=(
                (0.0, t1, 3.0 * lam_i / (2.0 * b * c)),
                (t1, t2, 3.0 * lam_i / (2.0 * a * c)),
                (t2, t3, 3.0 * lam_i / (2.0 * c)),
            )
        )
        f_d = PiecewiseCdf(segments=((t2, t3, 3.0 * lam_u / (2.0 * c)),))
        f_a = PiecewiseCdf(segments=((t1, t2, 3.0 * lam_u / (2.0 * a * c)),))
        f_b = _with_zero_atom(
            3.0 - lam_u / lam_i, ((0.0, t1, 3.0 * lam_u / (2.0 * b * c)),)
        )

    return RegimeSolution(
        params=params,
        regime=regime,
        lambda_informed=lam_i,
        lambda_uninformed=lam_u,
        f_uninformed=f_u,
        f_diag=f_d,
        f_alpha=f_a,
        f_beta=f_b,
    )


def build_equilibrium(params: LottoParams) -> StrategyProfile:
    """Full 3-state x 3-battlefield equilibrium profile."""
    return solve(params).profile()


# ---------------------------------------------------------------------------
# Value-of-information analysis (symmetric minor battlefields, beta = alpha)
# ---------------------------------------------------------------------------


def zero_crossing_alpha(gamma) -> float:
    """Threshold on alpha below which the informed player wins (payoff > 0)
    in the symmetric case beta = alpha, for a fixed budget ratio.

    Only defined for gamma > 1/3; below that the informed player cannot
    reach a positive payoff at any alpha.  A returned threshold >= 1 means
    the payoff is positive for every alpha in (0, 1).
    """
    _validate_gamma(gamma)
    if gamma <= 1.0 / 3.0:
        raise OutOfRegimeError(
            f"budget ratio {gamma} <= 1/3: informed payoff is never positive"
        )
    return (1.0 / 3.0 - gamma) / (3.0 * gamma**2 - 4.0 * gamma + 1.0 / 3.0)


def gamma_e(alpha, gamma) -> float:
    """Reduced budget ratio at which the informed player's payoff equals the
    uninformed baseline gamma - 1 (with beta = alpha).

    Solves informed_payoff(alpha, alpha, x) = gamma - 1 for x.  The branch
    of the payoff that applies produces either a quadratic (x > 1/3) or a
    linear (x <= 1/3) equation; both are solved in closed form, the
    quadratic through a rationalized root stable down to alpha = 0.
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha {alpha} outside [0, 1)")
    _validate_gamma(gamma)
    c_a = 1.0 / (1.0 + 2.0 * alpha)
    a_term = 2.0 * (1.0 - alpha) * c_a - gamma
    disc = math.sqrt(a_term**2 + 4.0 * c_a**2 * alpha * (1.0 - alpha))
    if a_term > 0.0:
        root = 2.0 * c_a * (1.0 - alpha) / (3.0 * (a_term + disc))
    else:
        root = (disc - a_term) / (6.0 * alpha * c_a)
    if root >= 1.0 / 3.0:
        return root
    # equalization happens in the low-budget regime, where the payoff is
    # linear in the ratio
    return gamma * (1.0 + 2.0 * alpha) / 3.0


def max_cost(alpha, gamma) -> float:
    """Largest budget fraction the informed player can trade for the state
    observation without ending up below the uninformed baseline."""
    ge = gamma_e(alpha, gamma)
    if ge >= 1.0 / 3.0:
        return (gamma - ge) / gamma
    return 1.0 - (1.0 + 2.0 * alpha) / 3.0


def voi(alpha, gamma, cost) -> float:
    """Net payoff change from buying the state observation with a fraction
    ``cost`` of the budget, relative to the uninformed baseline gamma - 1."""
    if not 0.0 <= cost < 1.0:
        raise ValueError(f"information cost {cost} outside [0, 1)")
    reduced = (1.0 - cost) * gamma
    if reduced <= 0.0:
        raise ValueError("reduced budget ratio must be positive")
    return informed_payoff(alpha, alpha, reduced) - complete_info_baseline(gamma)


def interim_equivalence_check(alpha, beta, gamma, budget_uninformed=1.0, tol=1e-9) -> bool:
    """True when all three informed types earn the same interim payoff in
    the constructed equilibrium (they must, since the valuation rows are
    permutations of one another)."""
    params = LottoParams(alpha, beta, gamma, budget_uninformed)
    profile = build_equilibrium(params)
    values, prior = params.valuation_matrix, params.prior
    payoffs = [interim_payoff(profile, values, prior, i) for i in range(3)]
    return max(payoffs) - min(payoffs) <= tol
