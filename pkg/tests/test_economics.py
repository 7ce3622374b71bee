import pytest

from sidedress import fixtures as fx
from sidedress.agronomy import EconParams
from sidedress.economics import Totals, compile_ledger, cost, profit, profit_loss_gain, revenue

CENT = 0.005

CONTROL = Totals(yield_total=16983, n_total=14759)


def _ledger(actual: Totals):
    return compile_ledger(CONTROL, actual, EconParams())


class TestPrimitives:
    def test_revenue_control(self):
        assert revenue(16983, 7.53) == pytest.approx(127881.99, abs=CENT)

    def test_revenue_after_first_attack(self):
        assert revenue(15243, 7.53) == pytest.approx(114779.79, abs=CENT)

    def test_revenue_zero(self):
        assert revenue(0, 7.53) == 0.0

    def test_cost_control(self):
        assert cost(14759, 1.10) == pytest.approx(16234.90, abs=CENT)

    def test_cost_after_second_attack(self):
        assert cost(14734, 1.10) == pytest.approx(16207.40, abs=CENT)

    def test_cost_zero(self):
        assert cost(0, 1.10) == 0.0

    def test_profit_is_difference(self):
        assert profit(127881.99, 16234.90) == pytest.approx(111647.09, abs=CENT)

    def test_profit_loss_gain_sign_convention(self):
        # positive = farmer loses money, negative = farmer gains
        assert profit_loss_gain(100.0, 60.0) == 40.0
        assert profit_loss_gain(60.0, 100.0) == -40.0

    def test_totals_reject_negative(self):
        with pytest.raises(ValueError):
            Totals(yield_total=-1, n_total=0)
        with pytest.raises(ValueError):
            Totals(yield_total=0, n_total=-1)


class TestPublishedLedgers:
    """The study's stated totals must reproduce its dollar figures to the cent."""

    def test_control(self):
        led = _ledger(CONTROL)
        assert led.expected_revenue == pytest.approx(127881.99, abs=CENT)
        assert led.expected_cost == pytest.approx(16234.90, abs=CENT)
        assert led.expected_profit == pytest.approx(111647.09, abs=CENT)
        assert led.profit_loss_gain == pytest.approx(0.0, abs=CENT)

    def test_scenario_1(self):
        led = _ledger(Totals(yield_total=15243, n_total=14783))
        assert led.actual_revenue == pytest.approx(114779.79, abs=CENT)
        assert led.actual_cost == pytest.approx(16261.30, abs=CENT)
        assert led.actual_profit == pytest.approx(98518.49, abs=CENT)
        assert led.profit_loss_gain == pytest.approx(13128.60, abs=CENT)

    def test_scenario_1_decomposition(self):
        # loss = lost sales + extra fertilizer spend
        sales = 7.53 * (16983 - 15243)
        fertilizer = 1.10 * (14783 - 14759)
        assert sales == pytest.approx(13102.20, abs=CENT)
        assert fertilizer == pytest.approx(26.40, abs=CENT)
        assert sales + fertilizer == pytest.approx(13128.60, abs=CENT)

    def test_scenario_2(self):
        led = _ledger(Totals(yield_total=12692, n_total=14734))
        assert led.actual_revenue == pytest.approx(95570.76, abs=CENT)
        assert led.actual_cost == pytest.approx(16207.40, abs=CENT)
        assert led.actual_profit == pytest.approx(79363.36, abs=CENT)
        assert led.profit_loss_gain == pytest.approx(32283.73, abs=CENT)

    def test_scenario_2_decomposition(self):
        # a small fertilizer saving offsets the large sales loss
        sales = 7.53 * (16983 - 12692)
        saving = 1.10 * (14759 - 14734)
        assert sales == pytest.approx(32311.23, abs=CENT)
        assert saving == pytest.approx(27.50, abs=CENT)
        assert sales - saving == pytest.approx(32283.73, abs=CENT)

    def test_scenario_3(self):
        led = _ledger(Totals(yield_total=15061, n_total=14796))
        assert led.actual_revenue == pytest.approx(113409.33, abs=CENT)
        assert led.actual_cost == pytest.approx(16275.60, abs=CENT)
        assert led.actual_profit == pytest.approx(97133.73, abs=CENT)
        assert led.profit_loss_gain == pytest.approx(14513.36, abs=CENT)

    def test_scenario_3_sales_loss_typo(self):
        # The study prints $14,476.66 for this quantity; its own revenue
        # figures give $14,472.66. The consistent value is the contract.
        sales = 7.53 * (16983 - 15061)
        assert sales == pytest.approx(fx.SCENARIO_3_SALES_LOSS_CONSISTENT, abs=CENT)
        assert abs(fx.SCENARIO_3_SALES_LOSS_STATED - sales) == pytest.approx(4.00, abs=CENT)


class TestLedgerIdentities:
    @pytest.mark.parametrize("actual", [
        Totals(15243, 14783), Totals(12692, 14734), Totals(15061, 14796), CONTROL,
    ])
    def test_profit_identities_exact(self, actual):
        led = _ledger(actual)
        assert led.expected_profit == led.expected_revenue - led.expected_cost
        assert led.actual_profit == led.actual_revenue - led.actual_cost
        assert led.profit_loss_gain == led.expected_profit - led.actual_profit

    def test_identity_scenario_loses_nothing(self):
        assert _ledger(CONTROL).profit_loss_gain == 0.0

    def test_zero_prices_degenerate(self):
        with pytest.raises(ValueError):
            compile_ledger(CONTROL, CONTROL, EconParams(corn_price=0.0))
