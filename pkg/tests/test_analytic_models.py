import math
import warnings

import numpy as np
import pytest

from cavsq import (
    BelowRegimeError,
    ComplexDiscriminantError,
    DriveParams,
    IdealModelInput,
    PhysicalRates,
    RegimeWarning,
    ScatterModelInput,
    detuning_bounds,
    ideal_optimum,
    minimize_1d,
    scatter_optimum,
    validity,
    xi2_ideal,
    xi2_scatter,
    xi2_scatter_asymptotic,
)


class TestXi2Ideal:
    def test_large_detuning_large_spin_limit(self):
        val = xi2_ideal(IdealModelInput(Qx=1.0, x=1e12, S=1e12))
        assert val == pytest.approx(1.0, abs=1e-9)

    def test_three_terms_by_hand(self):
        val = xi2_ideal(IdealModelInput(Qx=7.86, x=1.0, S=50.0))
        assert val == pytest.approx(0.334, abs=1e-3)

    def test_negative_detuning_can_leave_regime(self):
        with pytest.warns(RegimeWarning):
            val = xi2_ideal(IdealModelInput(Qx=1.0, x=-1.0, S=1e6))
        assert val < 0.0  # impossible for a variance; approximation limit

    def test_zero_detuning_rejected(self):
        with pytest.raises(ValueError):
            IdealModelInput(Qx=1.0, x=0.0, S=50.0)


class TestIdealOptimum:
    def test_intermediate_regime_values(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            opt = ideal_optimum(1.0, 50.0)
        assert opt.regime == "intermediate"
        assert opt.Qx_star == pytest.approx(7.86, abs=0.01)
        assert opt.xi2_star == pytest.approx(0.318, abs=0.001)

    def test_large_regime_values(self):
        opt = ideal_optimum(500.0, 50.0)
        assert opt.regime == "large"
        assert opt.Qx_star == pytest.approx(5.57, abs=0.01)
        assert opt.xi2_star == pytest.approx(0.0482, abs=0.0002)

    def test_below_regime(self):
        lower, _ = detuning_bounds(50.0)
        assert lower == pytest.approx(0.238, abs=0.001)
        with pytest.raises(BelowRegimeError) as err:
            ideal_optimum(0.1, 50.0)
        assert err.value.bound == pytest.approx(lower)

    def test_scaling_exponent_steepens_across_bound(self):
        # the optimum moves from S^(-2/5) to S^(-2/3) as x crosses the bound
        sizes = np.geomspace(1e3, 1e6, 6)
        for x, expected in ((2.0, -0.4), (1e5, -2 / 3)):
            vals = []
            for S in sizes:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", RegimeWarning)
                    vals.append(ideal_optimum(x, float(S)).xi2_star)
            slope = np.polyfit(np.log(sizes), np.log(vals), 1)[0]
            assert slope == pytest.approx(expected, abs=0.01)

    def test_closed_form_is_stationary(self):
        # finite differences confirm each closed-form Qx* is a stationary
        # point of the two terms that form actually balances
        def check(q, f):
            h = 1e-5 * q
            deriv = (f(q + h) - f(q - h)) / (2 * h)
            assert abs(deriv) <= 1e-6 * abs(f(q) / q)

        x, S = 10.0, 1e6
        opt = ideal_optimum(x, S)
        assert opt.regime == "intermediate"
        check(opt.Qx_star, lambda q: 2.0 / (q * x) + q**4 / (24.0 * S**2))

        x, S = 1e4, 1e4
        opt = ideal_optimum(x, S)
        assert opt.regime == "large"
        check(opt.Qx_star, lambda q: 1.0 / q**2 + q**4 / (24.0 * S**2))

    def test_agrees_with_numeric_minimization(self):
        # tight where the neglected 1/Qx^2 term is small, loose where not
        res = minimize_1d(
            lambda q: xi2_ideal(IdealModelInput(Qx=q, x=10.0, S=1e6)),
            1.0, 3000.0, tol=1e-6, log_spacing=True,
        )
        opt = ideal_optimum(10.0, 1e6)
        assert res.value == pytest.approx(opt.xi2_star, rel=0.02)

        res50 = minimize_1d(
            lambda q: xi2_ideal(IdealModelInput(Qx=q, x=1.0, S=50.0)),
            1.0, 200.0, tol=1e-8, log_spacing=True,
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            opt50 = ideal_optimum(1.0, 50.0)
        assert res50.value == pytest.approx(opt50.xi2_star, rel=0.10)


class TestXi2Scatter:
    def test_no_shearing_is_coherent(self):
        inp = ScatterModelInput(Qx=0.0, x=1.0, S=50.0, eta=2.0)
        assert inp.Rx == 0.0 and inp.U == 0.0 and inp.V == 0.0
        assert xi2_scatter(inp, "standard") == 1.0

    def test_derived_quantities(self):
        inp = ScatterModelInput(Qx=10.0, x=200.0, S=1e4, eta=2.0)
        assert inp.Rx == pytest.approx(10.0 * (1 + 200.0**2) / (8 * 200.0 * 1e4 * 2.0), rel=1e-12)
        curv = 10.0**2 * (1 - 2 * inp.Rx / 3)
        assert inp.U == pytest.approx(2 * 10.0 / (200.0 * 1e4) + curv / 1e4, rel=1e-12)
        assert inp.V == pytest.approx(10.0 / (2 * 200.0 * 1e4) + 2 * inp.Rx + curv / 4e4, rel=1e-12)

    def test_infinite_cooperativity_approaches_ideal(self):
        # for eta -> inf and Qx^2 << S the moment model reduces to the ideal
        # one, with the residual shrinking like the dropped 1/Qx cross terms
        rels = []
        for qx, tol in ((5.0, 0.10), (12.0, 0.02), (30.0, 0.005)):
            full = xi2_scatter(ScatterModelInput(Qx=qx, x=50.0, S=1e6, eta=math.inf))
            ideal = xi2_ideal(IdealModelInput(Qx=qx, x=50.0, S=1e6))
            rel = abs(full - ideal) / ideal
            rels.append(rel)
            assert rel < tol
        assert rels[0] > rels[1] > rels[2]

    def test_grid_minimum_large_detuning(self):
        qgrid = np.geomspace(0.5, 300.0, 600)
        vals = [
            xi2_scatter(ScatterModelInput(Qx=float(q), x=200.0, S=1e4, eta=2.0))
            for q in qgrid
        ]
        best = min(vals)
        assert best == pytest.approx(0.027, rel=0.30)
        assert best == pytest.approx(0.0266, rel=0.30)  # asymptotic anchor

    def test_monotone_in_eta(self):
        etas = np.geomspace(0.5, 500.0, 20)
        vals = [
            xi2_scatter(ScatterModelInput(Qx=10.0, x=200.0, S=1e4, eta=float(e)))
            for e in etas
        ]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_as_written_differs_and_can_break(self):
        inp = ScatterModelInput(Qx=60.0, x=1.0, S=1e4, eta=1.0)
        std = xi2_scatter(inp, "standard")
        assert std > 0
        # large transverse variance makes the unsquared discriminant huge
        raw = xi2_scatter(inp, "as-written")
        assert raw != pytest.approx(std, rel=1e-3)
        # a negative discriminant must be reported, not clamped: at negative
        # x and tiny Qx the variance dips just below S/2 while W^2 stays small
        tiny = ScatterModelInput(Qx=1e-5, x=-1.0, S=1e4, eta=math.inf)
        with pytest.raises(ComplexDiscriminantError) as err:
            xi2_scatter(tiny, "as-written")
        assert err.value.discriminant < 0.0
        assert xi2_scatter(tiny, "standard") <= 1.0  # standard mode unaffected

    def test_out_of_regime_variance_warns(self):
        # far past one scattered photon per atom the model breaks down
        bad = ScatterModelInput(Qx=654.0, x=200.0, S=1e4, eta=1.0)
        with pytest.warns(RegimeWarning):
            val = xi2_scatter(bad)
        assert val < 0


class TestAsymptotic:
    def test_terms_by_hand(self):
        val = xi2_scatter_asymptotic(1.0, 1.0, 1e12, 1.0)
        assert val == pytest.approx(3.0, rel=1e-9)

    def test_matches_full_model_in_regime(self):
        # agreement needs the full validity window: R_x small, Qx^2 << S,
        # and 1 << Qx (the expansion parameter scales like 1/Qx)
        rng = np.random.default_rng(8)
        tested = 0
        for _ in range(40):
            S = 10.0 ** rng.uniform(4, 7)
            x = 10.0 ** rng.uniform(1, 3)
            eta = 10.0 ** rng.uniform(0, 2)
            qx = 10.0 ** rng.uniform(1.0, 1.5)
            inp = ScatterModelInput(Qx=qx, x=x, S=S, eta=eta)
            if inp.Rx >= 0.01 or qx**2 > 1e-3 * S:
                continue
            tested += 1
            asymp = xi2_scatter_asymptotic(qx, x, S, eta)
            full = xi2_scatter(inp)
            assert asymp == pytest.approx(full, rel=0.10)
        assert tested >= 10

    def test_each_term_is_a_lower_bound(self):
        for qx, x, S, eta in ((2.0, 5.0, 1e4, 1.0), (20.0, 300.0, 1e5, 3.0)):
            val = xi2_scatter_asymptotic(qx, x, S, eta)
            assert val >= 1.0 / qx**2
            assert val >= 2.0 / (qx * x)
            assert val >= qx * (x**2 + 1) / (6 * x * S * eta)

    def test_warns_outside_regime(self):
        with pytest.warns(RegimeWarning):
            xi2_scatter_asymptotic(500.0, 1.0, 1e3, 1.0)

    def test_optimum_cross_check(self):
        with warnings.catch_warnings():
            # the pre-grid deliberately crosses the large-Rx region
            warnings.simplefilter("ignore", RegimeWarning)
            res = minimize_1d(
                lambda q: xi2_scatter_asymptotic(q, 1.0, 1e4, 1.0),
                1.0, 1e4, tol=1e-4, log_spacing=True,
            )
        assert res.value == pytest.approx(math.sqrt(8.0 / 3e4), rel=0.01)


class TestScatterOptimum:
    def test_small_detuning_values(self):
        opt = scatter_optimum(1.0, 1e4, 1.0)
        assert opt.regime == "small-detuning"
        assert opt.Q_scatt == pytest.approx(math.sqrt(6e4), rel=1e-12)
        assert opt.xi2_star == pytest.approx(0.0163, abs=0.0001)

    def test_large_detuning_values(self):
        opt = scatter_optimum(200.0, 1e4, 2.0)
        assert opt.regime == "large-detuning"
        assert opt.xi2_star == pytest.approx(0.0266, abs=0.0001)

    def test_vanishes_with_collective_cooperativity(self):
        vals = [scatter_optimum(5.0, S, 1.0).xi2_star for S in (1e4, 1e6, 1e8)]
        assert vals[0] > vals[1] > vals[2]
        assert vals[2] < 1e-3

    def test_warns_at_small_collective_cooperativity(self):
        with pytest.warns(RegimeWarning):
            scatter_optimum(1.0, 50.0, 0.1)


class TestValidity:
    def test_small_shift_value(self):
        p = DriveParams(kappa=4.0, Omega=0.01, beta0=1.0, x=1.0)
        rep = validity(p, 50.0, 10.0)
        assert rep.small_shift_value == pytest.approx(0.0125, rel=1e-12)
        assert rep.small_shift

    def test_shearing_window(self):
        p = DriveParams(kappa=4.0, Omega=0.01, beta0=1.0, x=1.0)
        rep = validity(p, 50.0, 0.5)
        assert not rep.regime_q  # violates 1 << |Qx|
        rep2 = validity(p, 50.0, 20.0)
        assert rep2.qx_lower_margin == pytest.approx(0.05)
        assert rep2.qx_upper_margin == pytest.approx(0.4)

    def test_detuning_classification(self):
        p = DriveParams(kappa=4.0, Omega=0.01, beta0=1.0, x=0.1)
        assert validity(p, 50.0, 10.0).detuning_regime == "below"
        p2 = DriveParams(kappa=4.0, Omega=0.01, beta0=1.0, x=1.0)
        assert validity(p2, 50.0, 10.0).detuning_regime == "intermediate"
        p3 = DriveParams(kappa=4.0, Omega=0.01, beta0=1.0, x=500.0)
        assert validity(p3, 50.0, 10.0).detuning_regime == "large"

    def test_dispersive_rows_with_rates(self):
        g, Delta, Gamma = 0.5, 1000.0, 3.0
        rates = PhysicalRates(g=g, Gamma=Gamma, Delta=Delta, omega_a=2 * Delta,
                              omega_c=5e5, omega_l=5e5 + 2.0)
        p = DriveParams(kappa=4.0, Omega=2 * g**2 / Delta, beta0=1.0,
                        delta=-2.0, rates=rates)
        rep = validity(p, 50.0, 10.0)
        names = [name for name, _, _ in rep.dispersive]
        assert names == ["kappa/Delta", "Gamma/Delta", "g/Delta", "photons/(Delta/g)^2"]
        assert all(ok for _, _, ok in rep.dispersive)

    def test_never_raises(self):
        p = DriveParams(kappa=4.0, Omega=5.0, beta0=10.0, x=0.0)
        rep = validity(p, 2.0, 0.0)
        assert not rep.small_shift or rep.small_shift  # report only
