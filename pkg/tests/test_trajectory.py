"""Sampled measurement records, the grid+golden MLE, and RMSE vs the bound."""
import itertools
import math
from collections import Counter

import numpy as np
import pytest

from seqtherm import (
    BathParams,
    MeasurementFamily,
    ProtocolSpec,
    QubitState,
    TrajectoryRecord,
    crb_report,
    fi_single,
    iid_string_probability,
    mle_estimate,
    simulate,
    simulate_many,
    sms_string_probability,
)

GROUND = QubitState.ground()
PROJECTIVE = MeasurementFamily(0.0)
UNINFORMATIVE = MeasurementFamily(math.pi / 4)
BATH = BathParams(1.0)


class TestSimulate:
    def test_deterministic_per_seed_and_trial(self):
        spec = ProtocolSpec("sms", 12, 1.0, GROUND, PROJECTIVE)
        a = simulate(spec, BATH, 42, trial=3)
        b = simulate(spec, BATH, 42, trial=3)
        assert a == b
        assert a.scheme == "sms" and a.true_T == 1.0 and a.seed == 42

    def test_trials_give_distinct_records(self):
        spec = ProtocolSpec("sms", 20, 1.0, GROUND, PROJECTIVE)
        records = {simulate(spec, BATH, 0, trial=t).outcomes for t in range(20)}
        assert len(records) > 1

    def test_outcomes_are_plus_minus_one(self):
        spec = ProtocolSpec("iid", 9, 0.5, GROUND, MeasurementFamily(0.2))
        rec = simulate(spec, BATH, 1)
        assert len(rec.outcomes) == 9
        assert all(s in (1, -1) for s in rec.outcomes)

    def test_record_validates_outcomes(self):
        with pytest.raises(ValueError):
            TrajectoryRecord((1, 0, -1), "iid", 1.0, 0)

    def test_schemes_agree_for_single_measurement(self):
        # with n = 1 there is no history, so the same uniform draw must map
        # to the same outcome under either scheme
        for trial in range(10):
            iid = simulate(ProtocolSpec("iid", 1, 1.0, GROUND, PROJECTIVE),
                           BATH, 9, trial)
            sms = simulate(ProtocolSpec("sms", 1, 1.0, GROUND, PROJECTIVE),
                           BATH, 9, trial)
            assert iid.outcomes == sms.outcomes

    def test_uninformative_family_gives_fair_coins(self):
        spec = ProtocolSpec("sms", 4, 1.0, GROUND, UNINFORMATIVE)
        m = simulate_many(spec, BATH, 20_000, 3)
        freq = (m == 1).mean()
        assert freq == pytest.approx(0.5, abs=0.01)


class TestSimulateMany:
    def test_shape_and_determinism(self):
        spec = ProtocolSpec("sms", 7, 1.0, GROUND, PROJECTIVE)
        a = simulate_many(spec, BATH, 50, 99)
        b = simulate_many(spec, BATH, 50, 99)
        assert a.shape == (50, 7)
        assert a.tobytes() == b.tobytes()

    def test_sms_string_frequencies_match_exact_probabilities(self):
        # chi-squared against the closed-form string distribution
        spec = ProtocolSpec("sms", 3, 1.0, GROUND, MeasurementFamily(0.3))
        trials = 40_000
        m = simulate_many(spec, BATH, trials, 13)
        counts = Counter(tuple(int(s) for s in row) for row in m)
        chi2 = 0.0
        for string in itertools.product((1, -1), repeat=3):
            expected = trials * sms_string_probability(spec, BATH, string)
            chi2 += (counts.get(string, 0) - expected) ** 2 / expected
        # df = 7; 26.0 is the 1e-4 tail
        assert chi2 < 26.0

    def test_iid_string_frequencies_match_exact_probabilities(self):
        spec = ProtocolSpec("iid", 3, 1.0, GROUND, PROJECTIVE)
        trials = 40_000
        m = simulate_many(spec, BATH, trials, 21)
        counts = Counter(tuple(int(s) for s in row) for row in m)
        chi2 = 0.0
        for string in itertools.product((1, -1), repeat=3):
            expected = trials * iid_string_probability(spec, BATH, string)
            chi2 += (counts.get(string, 0) - expected) ** 2 / expected
        assert chi2 < 26.0

    def test_iid_columns_identically_distributed(self):
        spec = ProtocolSpec("iid", 6, 2.0, GROUND, PROJECTIVE)
        m = simulate_many(spec, BATH, 30_000, 5)
        freqs = (m == 1).mean(axis=0)
        assert np.ptp(freqs) < 0.02


class TestMLE:
    def test_recovers_temperature_from_long_record(self):
        spec = ProtocolSpec("iid", 400, 1.0, GROUND, PROJECTIVE)
        rec = simulate(spec, BATH, 3)
        res = mle_estimate(rec, spec)
        assert res.T_hat == pytest.approx(1.077, abs=1e-3)
        assert not res.flat_likelihood and not res.boundary_hit

    def test_flat_likelihood_flagged_for_uninformative_family(self):
        spec = ProtocolSpec("sms", 10, 1.0, GROUND, UNINFORMATIVE)
        res = mle_estimate(simulate(spec, BATH, 5), spec)
        assert res.flat_likelihood
        assert res.T_hat == pytest.approx(2.55)  # midpoint of the prior range

    def test_rejects_bad_range(self):
        spec = ProtocolSpec("iid", 3, 1.0, GROUND, PROJECTIVE)
        rec = simulate(spec, BATH, 1)
        with pytest.raises(ValueError):
            mle_estimate(rec, spec, T_range=(2.0, 1.0))
        with pytest.raises(ValueError):
            mle_estimate(rec, spec, T_range=(0.0, 1.0))

    def test_boundary_hit_flagged(self):
        # an all-minus record pushes the estimate to the cold edge
        spec = ProtocolSpec("iid", 30, 1.0, GROUND, PROJECTIVE)
        rec = TrajectoryRecord((-1,) * 30, "iid", 1.0, 0)
        res = mle_estimate(rec, spec)
        assert res.boundary_hit


class TestCrbReport:
    def test_requires_minimum_trials(self):
        spec = ProtocolSpec("iid", 4, 1.0, GROUND, PROJECTIVE)
        with pytest.raises(ValueError):
            crb_report(spec, BATH, 99, 0)

    def test_iid_bound_is_the_closed_form(self):
        spec = ProtocolSpec("iid", 16, 1.0, GROUND, PROJECTIVE)
        rep = crb_report(spec, BATH, 200, 11)
        exact = 1.0 / math.sqrt(16 * fi_single(GROUND, BATH, 1.0, PROJECTIVE).value)
        assert rep.crb == exact
        assert rep.trials == 200 and rep.scheme == "iid" and rep.n == 16

    def test_iid_regression_fixture(self):
        rep = crb_report(ProtocolSpec("iid", 16, 1.0, GROUND, PROJECTIVE),
                         BATH, 200, 11)
        assert float(np.median(rep.estimates)) == pytest.approx(1.053, abs=1e-3)
        assert rep.rmse == pytest.approx(0.922, abs=1e-3)
        assert 1.0 <= rep.ratio <= 5.0

    def test_sms_regression_fixture(self):
        rep = crb_report(ProtocolSpec("sms", 8, 1.0, GROUND, PROJECTIVE),
                         BATH, 200, 7)
        assert float(np.median(rep.estimates)) == pytest.approx(1.195, abs=1e-3)
        assert rep.rmse == pytest.approx(1.799, abs=1e-3)
        assert 0.5 <= rep.ratio <= 5.0

    def test_sms_beyond_enumeration_budget_uses_chain_fi(self):
        # n = 32 > 24: the report must still attach an exact finite bound
        rep = crb_report(ProtocolSpec("sms", 32, 1.0, GROUND, PROJECTIVE),
                         BATH, 100, 7)
        assert 0.0 < rep.crb < math.inf
        assert rep.n == 32

    def test_report_reproducible(self):
        spec = ProtocolSpec("sms", 6, 1.0, GROUND, PROJECTIVE)
        a = crb_report(spec, BATH, 120, 17)
        b = crb_report(spec, BATH, 120, 17)
        assert a.estimates.tobytes() == b.estimates.tobytes()
        assert a.rmse == b.rmse and a.ratio == b.ratio
