"""Worst-case attack search over per-zone multiplier maps.

Because yields and costs separate by zone once each zone's multiplier is
fixed, the farmer's loss under a multiplier map is a sum of independent
per-zone terms. That makes the unconstrained worst case a per-zone
argmax, and the stealth-constrained worst case a knapsack-style dynamic
program over the running signed fertilizer delta.

The stealth constraint bounds |net in-season fertilizer delta| across
the whole field; it is a proxy for detectability (a big swing shows up
on the invoice or in the tank), chosen here because the source material
offers no detection model. Deltas are discretized at a configurable
resolution, rounded toward zero, and the DP is exact with respect to
that discretization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .agronomy import (
    EconParams,
    Prescription,
    YieldBounds,
    _ordered_sum,
    harvest,
    yield_from_rate,
)
from .attacks import AttackScenario, apply_attack
from .economics import Ledger, Totals, compile_ledger
from .field import FieldGrid

# Guard for the DP state vector; reached only with tiny resolutions on
# huge grids, in which case a coarser budget_resolution is the fix.
_MAX_DP_STATES = 20_000_000


@dataclass(frozen=True)
class OptimizerConfig:
    """Search space and stealth constraint for the worst-case search.

    stealth_budget is the maximum |net in-season fertilizer delta| in lb,
    or None for an unconstrained search. budget_resolution is the DP
    discretization step in lb.
    """

    multiplier_set: tuple[float, ...]
    stealth_budget: float | None = None
    budget_resolution: float = 1.0

    def __post_init__(self) -> None:
        if not self.multiplier_set:
            raise ValueError("multiplier_set must be nonempty")
        if any(m < 0 for m in self.multiplier_set):
            raise ValueError("multipliers must be nonnegative")
        if list(self.multiplier_set) != sorted(set(self.multiplier_set)):
            raise ValueError("multiplier_set must be strictly ascending")
        if 1.0 not in self.multiplier_set:
            raise ValueError("multiplier_set must contain 1.0 so doing nothing stays feasible")
        if self.stealth_budget is not None and self.stealth_budget < 0:
            raise ValueError(f"stealth_budget must be nonnegative, got {self.stealth_budget}")
        if self.budget_resolution <= 0:
            raise ValueError(f"budget_resolution must be positive, got {self.budget_resolution}")


@dataclass(frozen=True)
class AttackSolution:
    """A scenario the search produced, with its objective value.

    loss is the farmer's profit loss/gain under the scenario;
    net_fertilizer_delta is the true (undiscretized) in-season delta.
    """

    scenario: AttackScenario
    loss: float
    net_fertilizer_delta: float
    optimality: str


@dataclass(frozen=True)
class LossTable:
    """Per-zone loss and fertilizer delta for each candidate multiplier.

    losses[z][k] is the farmer's loss contribution if zone z runs at
    multiplier multipliers[k]; deltas[z][k] the corresponding in-season
    lb delta. The baseline yield is the zone's untampered (multiplier 1)
    harvest, so the k with multiplier 1 contributes exactly zero to both.
    """

    rows: int
    cols: int
    multipliers: tuple[float, ...]
    losses: tuple[tuple[float, ...], ...]
    deltas: tuple[tuple[float, ...], ...]

    def preference_order(self) -> list[int]:
        # Tie-break order: closest to 1 first, then the smaller multiplier.
        return sorted(range(len(self.multipliers)),
                      key=lambda k: (abs(self.multipliers[k] - 1.0), self.multipliers[k]))


def zone_loss_table(
    field: FieldGrid,
    prescription: Prescription,
    econ: EconParams,
    bounds: YieldBounds,
    multiplier_set: tuple[float, ...],
) -> LossTable:
    """Tabulate each zone's loss contribution per candidate multiplier.

    loss(z, m) = corn_price * (baseline_yield_z - yield_z(m))
               + nitrogen_price * (m - 1) * inseason_z
    delta(z, m) = (m - 1) * inseason_z
    """
    cfg = OptimizerConfig(multiplier_set=tuple(multiplier_set))
    price_adj = econ.price_adjustment()
    losses = []
    deltas = []
    for idx, zone in enumerate(field):
        plant = prescription.planting[idx]
        season = prescription.inseason[idx]
        baseline = yield_from_rate(plant + season, zone, bounds, price_adj, econ.timing_adj)
        zone_losses = []
        zone_deltas = []
        for m in cfg.multiplier_set:
            ay = yield_from_rate(plant + m * season, zone, bounds, price_adj, econ.timing_adj)
            delta = (m - 1.0) * season
            zone_losses.append(econ.corn_price * (baseline - ay) + econ.nitrogen_price * delta)
            zone_deltas.append(delta)
        losses.append(tuple(zone_losses))
        deltas.append(tuple(zone_deltas))
    return LossTable(
        rows=field.rows,
        cols=field.cols,
        multipliers=cfg.multiplier_set,
        losses=tuple(losses),
        deltas=tuple(deltas),
    )


def _solution_from_choices(table: LossTable, choices: list[int], name: str) -> AttackSolution:
    multipliers = tuple(table.multipliers[k] for k in choices)
    scenario = AttackScenario(name=name, rows=table.rows, cols=table.cols, multipliers=multipliers)
    loss = _ordered_sum(table.losses[z][k] for z, k in enumerate(choices))
    delta = _ordered_sum(table.deltas[z][k] for z, k in enumerate(choices))
    return AttackSolution(scenario=scenario, loss=loss, net_fertilizer_delta=delta, optimality="exact")


def worst_case_unconstrained(table: LossTable) -> AttackSolution:
    """Per-zone argmax of loss; ties go to the multiplier nearest 1."""
    order = table.preference_order()
    choices = []
    for zone_losses in table.losses:
        best = order[0]
        for k in order[1:]:
            if zone_losses[k] > zone_losses[best]:
                best = k
        choices.append(best)
    return _solution_from_choices(table, choices, "optimized-unconstrained")


def worst_case_budgeted(
    table: LossTable,
    stealth_budget: float | None,
    budget_resolution: float = 1.0,
) -> AttackSolution:
    """Maximize loss subject to |net fertilizer delta| <= stealth_budget.

    Dynamic program over zones; the state is the running sum of per-zone
    deltas, each truncated toward zero to whole resolution steps. A None
    budget means unconstrained. The multiplier-1 column gives every zone
    a zero-step, zero-loss option, so the do-nothing map is always
    feasible and the result is never negative.
    """
    if stealth_budget is None:
        return worst_case_unconstrained(table)
    if stealth_budget < 0:
        raise ValueError(f"stealth_budget must be nonnegative, got {stealth_budget}")
    if budget_resolution <= 0:
        raise ValueError(f"budget_resolution must be positive, got {budget_resolution}")

    n_zones = len(table.losses)
    n_mult = len(table.multipliers)
    steps = [
        [math.trunc(table.deltas[z][k] / budget_resolution) for k in range(n_mult)]
        for z in range(n_zones)
    ]
    budget_steps = math.floor(stealth_budget / budget_resolution)

    # The running sum may legitimately leave [-budget, +budget] mid-pass
    # and come back (heavy under-application early, compensated later),
    # so the state space spans everything reachable, not just the budget
    # window.
    neg_reach = sum(min(0, min(zone_steps)) for zone_steps in steps)
    pos_reach = sum(max(0, max(zone_steps)) for zone_steps in steps)
    size = pos_reach - neg_reach + 1
    if size * (n_zones + 1) > _MAX_DP_STATES:
        raise ValueError(
            f"DP state space of {size} deltas x {n_zones} zones is too large;"
            f" increase budget_resolution"
        )
    offset = -neg_reach

    loss_rows = [np.asarray(row, dtype=float) for row in table.losses]

    value = np.full((n_zones + 1, size), -np.inf)
    final = value[n_zones]
    lo = max(0, offset - budget_steps)
    hi = min(size - 1, offset + budget_steps)
    final[lo:hi + 1] = 0.0

    for z in range(n_zones - 1, -1, -1):
        acc = np.full(size, -np.inf)
        nxt = value[z + 1]
        for k in range(n_mult):
            st = steps[z][k]
            shifted = np.full(size, -np.inf)
            if st >= 0:
                if st < size:
                    shifted[: size - st] = nxt[st:]
            else:
                if -st < size:
                    shifted[-st:] = nxt[: size + st]
            np.maximum(acc, shifted + loss_rows[z][k], out=acc)
        value[z] = acc

    order = table.preference_order()
    choices = []
    state = offset
    for z in range(n_zones):
        target = value[z][state]
        for k in order:
            nxt_state = state + steps[z][k]
            if not 0 <= nxt_state < size:
                continue
            candidate = loss_rows[z][k] + value[z + 1][nxt_state]
            if candidate == target:
                choices.append(k)
                state = nxt_state
                break
        else:
            raise RuntimeError("DP reconstruction lost the optimal path")
    return _solution_from_choices(table, choices, "optimized-budgeted")


def optimize(
    field: FieldGrid,
    prescription: Prescription,
    econ: EconParams,
    bounds: YieldBounds,
    config: OptimizerConfig,
) -> AttackSolution:
    """Run the configured worst-case search end to end."""
    table = zone_loss_table(field, prescription, econ, bounds, config.multiplier_set)
    if config.stealth_budget is None:
        return worst_case_unconstrained(table)
    return worst_case_budgeted(table, config.stealth_budget, config.budget_resolution)


def evaluate_scenario(
    field: FieldGrid,
    prescription: Prescription,
    scenario: AttackScenario,
    econ: EconParams = EconParams(),
    bounds: YieldBounds = YieldBounds(),
) -> Ledger:
    """Ground-truth objective: apply the attack, harvest, compile the ledger.

    The expected side of the ledger is the untampered pass (prescribed
    rates through the same yield model), so the identity scenario always
    produces a zero profit loss/gain.
    """
    expected_yield = harvest(field, prescription.n_rec, bounds, econ)
    applied = apply_attack(prescription, scenario)
    actual_yield = harvest(field, applied, bounds, econ)
    expected = Totals(yield_total=expected_yield.total, n_total=prescription.total)
    actual = Totals(yield_total=actual_yield.total, n_total=_ordered_sum(applied))
    return compile_ledger(expected, actual, econ)
