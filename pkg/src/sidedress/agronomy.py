"""Nebraska nitrogen recommendation model and its yield inversion.

The recommendation for a zone is

    N_rec = max(0, [35 + 1.2*EY - 8*NO3 - 0.14*EY*OM - credits]
                   * price_adj * timing_adj)

in lb/acre, where EY is the yield goal (bu/acre), NO3 the residual soil
nitrate (ppm), OM percent organic matter, and credits any other nitrogen
credits (lb/acre). The price adjustment is a quadratic in the
corn-to-nitrogen price ratio r:

    price_adj = 0.263 + 0.1256*r - 0.00421*r**2

Yields are recovered from nitrogen rates by inverting the recommendation
algebraically and clamping: a global floor (100 bu/acre, the yield with
no fertilizer) and a per-zone cap of yield_goal + 30 bu/acre.

Modeling note: the same curve serves as both the recommendation and the
yield response. Whatever rate ends up applied, the resulting yield is the
rate's preimage under the recommendation formula, clamped. "Expected"
versus "actual" yield is purely a call-site distinction; there is one
inversion function.

All arithmetic is carried at full float precision. Rounding for display
is the reporting layer's concern.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import FieldGrid, Zone

# The inversion denominator 1.2 - 0.14*OM hits zero at this OM.
_OM_DEGENERATE = 1.2 / 0.14


@dataclass(frozen=True)
class EconParams:
    """Prices and the application-timing factor.

    timing_adj is the fixed adjustment for split at-planting/in-season
    programs (0.95).
    """

    corn_price: float = 7.53
    nitrogen_price: float = 1.10
    timing_adj: float = 0.95

    def __post_init__(self) -> None:
        if self.corn_price <= 0:
            raise ValueError(f"corn_price must be positive, got {self.corn_price}")
        if self.nitrogen_price <= 0:
            raise ValueError(f"nitrogen_price must be positive, got {self.nitrogen_price}")
        if not 0 < self.timing_adj <= 1:
            raise ValueError(f"timing_adj must be in (0, 1], got {self.timing_adj}")

    def price_adjustment(self) -> float:
        return price_adjustment(self.corn_price, self.nitrogen_price)


@dataclass(frozen=True)
class YieldBounds:
    """Attainable-yield clamps: global floor, per-zone cap of goal + boost."""

    floor: float = 100.0
    boost: float = 30.0

    def __post_init__(self) -> None:
        if self.floor < 0:
            raise ValueError(f"floor must be nonnegative, got {self.floor}")
        if self.boost < 0:
            raise ValueError(f"boost must be nonnegative, got {self.boost}")


@dataclass(frozen=True)
class SplitFractions:
    """How the recommendation divides between planting and in-season passes."""

    at_planting: float = 0.25
    in_season: float = 0.75

    def __post_init__(self) -> None:
        if not (0 <= self.at_planting <= 1 and 0 <= self.in_season <= 1):
            raise ValueError("split fractions must lie in [0, 1]")
        if abs(self.at_planting + self.in_season - 1.0) > 1e-9:
            raise ValueError(
                f"split fractions must sum to 1, got {self.at_planting} + {self.in_season}"
            )


@dataclass(frozen=True)
class Prescription:
    """Per-zone nitrogen prescription, row-major, split into the two passes.

    planting[i] + inseason[i] reproduces n_rec[i] exactly because only
    the larger share is a rounded product; the smaller one is the exact
    remainder (see split_prescription).
    """

    rows: int
    cols: int
    n_rec: tuple[float, ...]
    planting: tuple[float, ...]
    inseason: tuple[float, ...]

    def __post_init__(self) -> None:
        n = self.rows * self.cols
        if not (len(self.n_rec) == len(self.planting) == len(self.inseason) == n):
            raise ValueError(f"prescription arrays must have {n} entries")

    @property
    def planting_total(self) -> float:
        return _ordered_sum(self.planting)

    @property
    def inseason_total(self) -> float:
        return _ordered_sum(self.inseason)

    @property
    def total(self) -> float:
        return _ordered_sum(self.n_rec)


@dataclass(frozen=True)
class HarvestResult:
    """Per-zone yields (row-major) and their fixed-order total, bu."""

    yields: tuple[float, ...]
    total: float


def _ordered_sum(values) -> float:
    # Sequential left-to-right reduction; keeps totals bit-identical
    # regardless of any upstream parallelism.
    acc = 0.0
    for v in values:
        acc += v
    return acc


def price_adjustment(corn_price: float, nitrogen_price: float) -> float:
    """Quadratic price adjustment in the corn/nitrogen price ratio.

    Depends only on the ratio, so scaling both prices together is a
    no-op. At the default $7.53/bu and $1.10/lb this is 0.9255 (0.926
    rounded).
    """
    if corn_price <= 0:
        raise ValueError(f"corn_price must be positive, got {corn_price}")
    if nitrogen_price <= 0:
        raise ValueError(f"nitrogen_price must be positive, got {nitrogen_price}")
    ratio = corn_price / nitrogen_price
    return 0.263 + 0.1256 * ratio - 0.00421 * ratio * ratio


def recommend_nitrogen(zone: Zone, price_adj: float, timing_adj: float) -> float:
    """Recommended nitrogen for one zone, lb/acre, clamped at zero.

    A rich-soil zone (high nitrate or credits) can drive the bracket
    negative; negative fertilizer is meaningless, so the recommendation
    bottoms out at 0.
    """
    bracket = (
        35.0
        + 1.2 * zone.yield_goal
        - 8.0 * zone.soil_nitrate
        - 0.14 * zone.yield_goal * zone.organic_matter
        - zone.n_credits
    )
    return max(0.0, bracket * price_adj * timing_adj)


def split_prescription(n_rec: float, fractions: SplitFractions) -> tuple[float, float]:
    """Divide a recommendation into (planting, in-season) shares.

    The larger share is the fraction product and the smaller one the
    remainder. With the larger rounded product in [n/2, n], Sterbenz's
    lemma makes the subtraction exact, so the shares sum back to n_rec
    bit for bit; remainder-ing the smaller share off the product of the
    larger fraction does not guarantee that.
    """
    if n_rec < 0:
        raise ValueError(f"n_rec must be nonnegative, got {n_rec}")
    if fractions.at_planting >= fractions.in_season:
        planting = fractions.at_planting * n_rec
        return planting, n_rec - planting
    inseason = fractions.in_season * n_rec
    return n_rec - inseason, inseason


def yield_from_rate(
    n_rate: float,
    zone: Zone,
    bounds: YieldBounds,
    price_adj: float,
    timing_adj: float,
) -> float:
    """Yield implied by a nitrogen rate, bu/acre, clamped to attainable bounds.

    Inverts the recommendation formula for the zone and clamps to
    [floor, yield_goal + boost]. Zero rate lands below the floor for any
    realistic zone; heavy over-application saturates at the cap.
    """
    if n_rate < 0:
        raise ValueError(f"n_rate must be nonnegative, got {n_rate}")
    if zone.organic_matter >= _OM_DEGENERATE:
        raise ValueError(
            f"organic_matter {zone.organic_matter} degenerates the yield inversion"
            f" (denominator 1.2 - 0.14*OM <= 0)"
        )
    raw = (
        n_rate / (price_adj * timing_adj)
        + 8.0 * zone.soil_nitrate
        - 35.0
        + zone.n_credits
    ) / (1.2 - 0.14 * zone.organic_matter)
    cap = zone.yield_goal + bounds.boost
    return max(bounds.floor, min(cap, raw))


def prescribe_field(
    field: FieldGrid,
    econ: EconParams = EconParams(),
    fractions: SplitFractions = SplitFractions(),
) -> Prescription:
    """Prescription for every zone of a field.

    The price adjustment is computed once from the prices; recommendation
    and split then run per zone in row-major order.
    """
    price_adj = econ.price_adjustment()
    n_rec = []
    planting = []
    inseason = []
    for zone in field:
        rec = recommend_nitrogen(zone, price_adj, econ.timing_adj)
        plant, season = split_prescription(rec, fractions)
        n_rec.append(rec)
        planting.append(plant)
        inseason.append(season)
    return Prescription(
        rows=field.rows,
        cols=field.cols,
        n_rec=tuple(n_rec),
        planting=tuple(planting),
        inseason=tuple(inseason),
    )


def harvest(
    field: FieldGrid,
    applied: tuple[float, ...] | list[float],
    bounds: YieldBounds = YieldBounds(),
    econ: EconParams = EconParams(),
) -> HarvestResult:
    """Yields produced by per-zone total applied nitrogen (row-major lb/acre)."""
    if len(applied) != len(field):
        raise ValueError(f"applied grid has {len(applied)} entries, field has {len(field)}")
    price_adj = econ.price_adjustment()
    yields = tuple(
        yield_from_rate(rate, zone, bounds, price_adj, econ.timing_adj)
        for zone, rate in zip(field, applied)
    )
    return HarvestResult(yields=yields, total=_ordered_sum(yields))
