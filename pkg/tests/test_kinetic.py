import math

import numpy as np
import pytest

from conftest import lattice_ks
from ineqstats import (AgentEnsemble, BinnedHistogram,
                       CycleSpec, DomainError, ExchangeRule, RULE_FIXED,
                       RULE_UNIFORM, couple_systems, cycle_profit_and_rate,
                       entropy, exchange_step, init_ensemble,
                       multiplicity_exact, run_simulation,
                       temperature_and_potential)


class TestEnsembleSetup:
    def test_even_split(self):
        assert init_ensemble(4, 8).balances.tolist() == [2, 2, 2, 2]

    def test_remainder_goes_to_first_agents(self):
        ens = init_ensemble(3, 8)
        assert ens.balances.tolist() == [3, 3, 2]
        assert ens.total == 8

    def test_zero_agents_rejected(self):
        with pytest.raises(DomainError):
            init_ensemble(0, 10)

    def test_equal_start_has_zero_entropy(self):
        ens = init_ensemble(10_000, 1_000_000)
        hist = BinnedHistogram.from_ensemble(ens, bin_width=1, origin=0)
        assert entropy(hist) == 0.0

    def test_rule_validation(self):
        with pytest.raises(DomainError):
            ExchangeRule("other")
        with pytest.raises(DomainError):
            ExchangeRule(RULE_FIXED, delta=0)
        with pytest.raises(DomainError):
            ExchangeRule(RULE_FIXED, floor=1)


class TestExchangeStep:
    def test_fixed_transfer_applied(self):
        ens = AgentEnsemble([5, 0])
        rng = np.random.default_rng(0)
        accepted = exchange_step(ens, ExchangeRule(RULE_FIXED, delta=1), rng, pair=(0, 1))
        assert accepted
        assert ens.balances.tolist() == [4, 1]

    def test_floor_rejection_leaves_state_unchanged(self):
        ens = AgentEnsemble([0, 5])
        rng = np.random.default_rng(0)
        accepted = exchange_step(ens, ExchangeRule(RULE_FIXED, delta=1), rng, pair=(0, 1))
        assert not accepted
        assert ens.balances.tolist() == [0, 5]

    def test_self_pair_rejected(self):
        ens = AgentEnsemble([5, 5])
        with pytest.raises(DomainError):
            exchange_step(ens, ExchangeRule(RULE_FIXED), np.random.default_rng(0), pair=(1, 1))

    def test_million_steps_conserve_exactly(self):
        ens = init_ensemble(100, 5000)
        rule = ExchangeRule(RULE_UNIFORM, delta=25)
        rng = np.random.default_rng(123)
        total = ens.total
        for _ in range(1_000_000):
            exchange_step(ens, rule, rng)
        assert ens.total == total
        assert ens.balances.min() >= 0


class TestRunSimulation:
    def test_determinism_bit_identical(self):
        runs = []
        for _ in range(2):
            ens = init_ensemble(500, 25_000)
            traj = run_simulation(ens, ExchangeRule(RULE_UNIFORM, delta=100),
                                  200_000, checkpoint_every=50_000, seed=42)
            runs.append(traj)
        a, b = runs
        assert np.array_equal(a.ensemble.balances, b.ensemble.balances)
        assert np.array_equal(a.entropy, b.entropy)
        assert np.array_equal(a.steps, b.steps)

    def test_entropy_grows_from_degenerate_start(self):
        ens = init_ensemble(2000, 100_000)
        traj = run_simulation(ens, ExchangeRule(RULE_UNIFORM, delta=100),
                              2_000_000, checkpoint_every=500_000, seed=7)
        assert traj.entropy[0] == 0.0
        assert traj.entropy[-1] > traj.entropy[0]

    def test_relaxes_to_exponential(self):
        ens = init_ensemble(2000, 100_000)   # T = 50 quanta
        traj = run_simulation(ens, ExchangeRule(RULE_UNIFORM, delta=100),
                              10_000_000, seed=11)
        ks = lattice_ks(traj.ensemble.balances, 50.0)
        assert ks < 0.05   # equilibrium KS scale for N=2000 is ~0.03
        s_eq = 2000 * (1 + math.log(50.0))
        assert abs(traj.entropy[-1] / s_eq - 1) < 0.02

    def test_debt_mode_conserves_and_respects_floor(self):
        ens = init_ensemble(1000, 50_000)
        rule = ExchangeRule(RULE_UNIFORM, delta=100, floor=-50)
        traj = run_simulation(ens, rule, 5_000_000, seed=3)
        assert traj.ensemble.total == 50_000
        assert traj.ensemble.balances.min() >= -50

    def test_checkpoint_steps_are_attempt_counts(self):
        ens = init_ensemble(100, 5000)
        traj = run_simulation(ens, ExchangeRule(RULE_FIXED), 1000,
                              checkpoint_every=250, seed=1)
        assert traj.steps[0] == 0
        assert traj.steps[-1] >= 1000
        assert np.all(np.diff(traj.steps) > 0)


class TestSimulationConfig:
    def test_json_schema_round_trip(self):
        from ineqstats import SimulationConfig
        import json
        config = SimulationConfig(n_agents=400, total_money_quanta=20000,
                                  steps=100000, seed=9, rule="uniform",
                                  floor=-5, quantum_value=2.0,
                                  checkpoint_every=25000)
        blob = json.loads(config.to_json())
        assert set(blob) == {"n_agents", "total_money_quanta", "quantum_value",
                             "rule", "delta", "floor", "steps", "seed",
                             "checkpoint_every"}
        assert blob["delta"] == 100   # resolved to 2 * M/N for uniform
        again = SimulationConfig.from_json(config.to_json())
        assert again.exchange_rule() == config.exchange_rule()
        assert again.seed == 9 and again.checkpoint_every == 25000

    def test_config_run_matches_direct_run(self):
        from ineqstats import SimulationConfig, run_from_config
        config = SimulationConfig(n_agents=300, total_money_quanta=15000,
                                  steps=60000, seed=21)
        traj_a = run_from_config(config)
        ens = init_ensemble(300, 15000)
        traj_b = run_simulation(ens, config.exchange_rule(), 60000, seed=21)
        assert np.array_equal(traj_a.ensemble.balances, traj_b.ensemble.balances)

    def test_bad_config_rejected(self):
        from ineqstats import SimulationConfig, FormatError
        with pytest.raises(FormatError):
            SimulationConfig.from_json("{not json")
        with pytest.raises(DomainError):
            SimulationConfig.from_json('{"n_agents": 10}')


class TestEntropyAndMultiplicity:
    def test_single_bin_entropy_zero(self):
        assert entropy(BinnedHistogram(np.array([7]))) == 0.0

    def test_small_split_value(self):
        # -[2 ln(2/4) + ln(1/4) + ln(1/4)] = 2 ln 2 + 4 ln 2 = 6 ln 2
        hist = BinnedHistogram(np.array([2, 1, 1]))
        assert entropy(hist) == pytest.approx(6 * math.log(2), abs=1e-12)

    def test_uniform_spread(self):
        hist = BinnedHistogram(np.full(8, 5))   # 40 agents over 8 bins
        assert entropy(hist) == pytest.approx(40 * math.log(8), rel=1e-12)

    def test_empty_histogram_rejected(self):
        with pytest.raises(DomainError):
            entropy(BinnedHistogram(np.array([0, 0])))

    def test_multiplicity_small_case(self):
        omega, log_omega = multiplicity_exact([2, 1, 1])
        assert omega == 12
        assert log_omega == pytest.approx(math.log(12), abs=1e-12)

    def test_multiplicity_single_bin(self):
        omega, log_omega = multiplicity_exact([9])
        assert omega == 1
        assert log_omega == 0.0

    def test_multiplicity_range_limit(self):
        with pytest.raises(DomainError):
            multiplicity_exact([21])

    def test_stirling_bound_and_shrinking_gap(self):
        gaps = []
        for n in (8, 12, 16):
            occ = [n // 4] * 4
            _, log_omega = multiplicity_exact(occ)
            s = entropy(BinnedHistogram(np.array(occ)))
            assert log_omega <= s
            gaps.append((s - log_omega) / n)
        assert gaps[0] > gaps[1] > gaps[2]


class TestTemperatureAndPotential:
    def test_t_equals_quantum_gives_zero_potential(self):
        ens = AgentEnsemble([1, 1, 1])
        T, mu = temperature_and_potential(ens, m_star=1.0)
        assert T == 1.0
        assert mu == 0.0

    def test_ten_quanta_case(self):
        ens = AgentEnsemble([10, 10])
        for m_star in (1.0, 2.5):
            T, mu = temperature_and_potential(ens, m_star=m_star)
            assert T == pytest.approx(10 * m_star)
            assert mu == pytest.approx(-10 * m_star * math.log(10), rel=1e-12)

    def test_big_system(self):
        ens = init_ensemble(10_000, 1_000_000)
        T, _ = temperature_and_potential(ens)
        assert T == 100.0

    def test_zero_money_signalled(self):
        with pytest.raises(DomainError):
            temperature_and_potential(AgentEnsemble([0, 0]))


def _equilibrated(n, t_quanta, seed):
    ens = init_ensemble(n, n * t_quanta)
    run_simulation(ens, ExchangeRule(RULE_UNIFORM, delta=2 * t_quanta),
                   200 * (n // 2), seed=seed)
    return ens


class TestCoupledSystems:
    def test_money_flows_from_hot_to_cold(self):
        ens1 = _equilibrated(500, 100, seed=1)
        ens2 = _equilibrated(500, 50, seed=2)
        report = couple_systems(ens1, ens2, ExchangeRule(RULE_UNIFORM, delta=100),
                                2000, migration_rate=0.0, seed=3)
        assert report.delta_money > 0
        assert report.delta_agents == 0
        assert report.delta_entropy_estimate >= 0
        assert report.t1_final < report.t1_initial

    def test_symmetric_systems_have_null_flux(self):
        # estimate the null flux scale from replica runs, then check one
        # run sits inside three sigma
        fluxes = []
        for rep in range(20):
            ens1 = _equilibrated(400, 60, seed=100 + rep)
            ens2 = _equilibrated(400, 60, seed=200 + rep)
            report = couple_systems(ens1, ens2, ExchangeRule(RULE_UNIFORM, delta=120),
                                    1500, migration_rate=0.0, seed=300 + rep)
            fluxes.append(report.delta_money)
        sigma = np.std(fluxes)
        assert abs(fluxes[0]) < 3 * sigma

    def test_agents_flow_toward_higher_temperature(self):
        ens1 = _equilibrated(500, 100, seed=5)
        ens2 = _equilibrated(500, 50, seed=6)
        report = couple_systems(ens1, ens2, ExchangeRule(RULE_UNIFORM, delta=100),
                                500, migration_rate=1.0, seed=7)
        assert report.delta_agents < 0
        assert ens1.n + ens2.n == 1000
        assert ens1.total + ens2.total == report.t1_initial * 500 + report.t2_initial * 500

    def test_migration_rate_domain(self):
        ens1 = _equilibrated(100, 50, seed=8)
        ens2 = _equilibrated(100, 50, seed=9)
        with pytest.raises(DomainError):
            couple_systems(ens1, ens2, ExchangeRule(RULE_FIXED), 10, 1.5)


class TestCycle:
    def test_rectangle_area(self):
        cycle = CycleSpec(p1=2, p2=1, v1=0, v2=5, t1=3, t2=2)
        profit, _ = cycle_profit_and_rate(cycle)
        assert profit == 5.0

    def test_equal_temperatures_no_arbitrage(self):
        cycle = CycleSpec(p1=2, p2=1, v1=0, v2=5, t1=2, t2=2)
        _, rate = cycle_profit_and_rate(cycle)
        assert rate == 0.0

    def test_rate_from_temperature_ratio(self):
        cycle = CycleSpec(p1=2, p2=1, v1=1, v2=4, t1=3, t2=2)
        _, rate = cycle_profit_and_rate(cycle)
        assert rate == 0.5

    @pytest.mark.parametrize("kwargs", [
        dict(p1=1, p2=1, v1=0, v2=5, t1=3, t2=2),     # p1 must exceed p2
        dict(p1=2, p2=1, v1=5, v2=5, t1=3, t2=2),     # v2 must exceed v1
        dict(p1=2, p2=1, v1=0, v2=5, t1=3, t2=0),     # t2 positive
        dict(p1=2, p2=1, v1=-1, v2=5, t1=3, t2=2),    # v1 non-negative
    ])
    def test_invalid_cycles_rejected(self, kwargs):
        with pytest.raises(DomainError):
            CycleSpec(**kwargs)
