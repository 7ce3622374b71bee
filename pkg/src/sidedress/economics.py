"""Financial ledger: expected vs. actual revenue, cost, profit, and the delta.

Revenue is corn price times total bushels; cost is nitrogen price times
total pounds; profit is their difference. The headline number is the
profit loss/gain

    P_LG = expected_profit - actual_profit

so a positive value is money the farmer lost to the attack. Everything
is computed at full precision; cent rounding happens only in reports.

The ledger admits an exact decomposition used throughout the tests and
the optimizer:

    P_LG = corn_price * (expected_yield - actual_yield)
         + nitrogen_price * (actual_n - expected_n)
"""

from __future__ import annotations

from dataclasses import dataclass

from .agronomy import EconParams


@dataclass(frozen=True)
class Totals:
    """Aggregate outcome of one pass over the field: bushels and pounds."""

    yield_total: float
    n_total: float

    def __post_init__(self) -> None:
        if self.yield_total < 0:
            raise ValueError(f"yield_total must be nonnegative, got {self.yield_total}")
        if self.n_total < 0:
            raise ValueError(f"n_total must be nonnegative, got {self.n_total}")


@dataclass(frozen=True)
class Ledger:
    expected_yield_total: float
    actual_yield_total: float
    expected_n_total: float
    actual_n_total: float
    expected_revenue: float
    expected_cost: float
    expected_profit: float
    actual_revenue: float
    actual_cost: float
    actual_profit: float
    profit_loss_gain: float


def revenue(yield_total: float, corn_price: float) -> float:
    if yield_total < 0:
        raise ValueError(f"yield_total must be nonnegative, got {yield_total}")
    return yield_total * corn_price


def cost(n_total: float, nitrogen_price: float) -> float:
    if n_total < 0:
        raise ValueError(f"n_total must be nonnegative, got {n_total}")
    return n_total * nitrogen_price


def profit(revenue_total: float, cost_total: float) -> float:
    return revenue_total - cost_total


def profit_loss_gain(expected_profit: float, actual_profit: float) -> float:
    """Positive result = farmer loss."""
    return expected_profit - actual_profit


def compile_ledger(expected: Totals, actual: Totals, econ: EconParams) -> Ledger:
    """Populate the full ledger from expected and actual pass totals."""
    r_exp = revenue(expected.yield_total, econ.corn_price)
    c_exp = cost(expected.n_total, econ.nitrogen_price)
    p_exp = profit(r_exp, c_exp)
    r_act = revenue(actual.yield_total, econ.corn_price)
    c_act = cost(actual.n_total, econ.nitrogen_price)
    p_act = profit(r_act, c_act)
    return Ledger(
        expected_yield_total=expected.yield_total,
        actual_yield_total=actual.yield_total,
        expected_n_total=expected.n_total,
        actual_n_total=actual.n_total,
        expected_revenue=r_exp,
        expected_cost=c_exp,
        expected_profit=p_exp,
        actual_revenue=r_act,
        actual_cost=c_act,
        actual_profit=p_act,
        profit_loss_gain=profit_loss_gain(p_exp, p_act),
    )
