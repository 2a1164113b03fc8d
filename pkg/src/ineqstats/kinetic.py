"""Monte-Carlo simulation of pairwise money exchange.

Money is held in integer quanta so the total is conserved exactly, step
by step, including debt mode (a negative floor).  Two exchange rules are
provided, both of which satisfy detailed balance with respect to the
uniform measure on the conserved-sum lattice and therefore relax to the
exponential (Boltzmann-Gibbs) balance distribution:

``fixed``
    the transfer is exactly ``delta`` quanta;
``uniform``
    the transfer is drawn uniformly from {1, ..., delta}, independent of
    the payer's balance.

In both rules a transfer that would push the payer below the floor is
rejected and the state left unchanged.  (Drawing the amount from the
payer's own balance instead would break detailed balance and relax to a
visibly non-exponential state, so that variant is deliberately not
offered.)

``run_simulation`` executes exchange attempts in rounds of N//2 disjoint
pairs drawn from a fresh random permutation.  Within a round the pairs
share no agent, so the round is equivalent to N//2 sequential steps; the
batching exists purely so that 1e8 attempts vectorise to seconds.
``exchange_step`` performs one literal attempt for callers that need
step-level control.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, FormatError

__all__ = [
    "RULE_FIXED",
    "RULE_UNIFORM",
    "ExchangeRule",
    "AgentEnsemble",
    "BinnedHistogram",
    "CycleSpec",
    "FluxReport",
    "SimulationConfig",
    "Trajectory",
    "init_ensemble",
    "run_from_config",
    "exchange_step",
    "run_simulation",
    "entropy",
    "multiplicity_exact",
    "temperature_and_potential",
    "couple_systems",
    "cycle_profit_and_rate",
]

RULE_FIXED = "fixed"
RULE_UNIFORM = "uniform"


@dataclass(frozen=True)
class ExchangeRule:
    """Transfer rule: kind in {fixed, uniform}, amount scale ``delta``
    (exact amount for fixed, upper bound for uniform) and the minimum
    allowed balance ``floor`` (0, or negative in debt mode)."""

    kind: str
    delta: int = 1
    floor: int = 0

    def __post_init__(self):
        if self.kind not in (RULE_FIXED, RULE_UNIFORM):
            raise DomainError(f"unknown exchange rule {self.kind!r}")
        if self.delta < 1:
            raise DomainError("delta must be at least one quantum")
        if self.floor > 0:
            raise DomainError("floor must be <= 0")


class AgentEnsemble:
    """Mutable collection of per-agent balances in integer quanta."""

    def __init__(self, balances):
        arr = np.asarray(balances, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("balances must be a non-empty 1-d sequence")
        self.balances = arr

    @property
    def n(self) -> int:
        return self.balances.size

    @property
    def total(self) -> int:
        return int(self.balances.sum())

    def copy(self) -> "AgentEnsemble":
        return AgentEnsemble(self.balances.copy())

    def __repr__(self):
        return f"AgentEnsemble(n={self.n}, total={self.total})"


def init_ensemble(n_agents: int, total_quanta: int) -> AgentEnsemble:
    """Equal division start: each agent gets total//n quanta and the
    remainder goes one quantum each to the first agents."""
    if n_agents < 1:
        raise DomainError("need at least one agent")
    if total_quanta < 0:
        raise DomainError("total money must be non-negative")
    base, rem = divmod(total_quanta, n_agents)
    balances = np.full(n_agents, base, dtype=np.int64)
    balances[:rem] += 1
    return AgentEnsemble(balances)


def _draw_amount(rule: ExchangeRule, rng: np.random.Generator) -> int:
    if rule.kind == RULE_FIXED:
        return rule.delta
    return int(rng.integers(1, rule.delta + 1))


def exchange_step(ens: AgentEnsemble, rule: ExchangeRule,
                  rng: np.random.Generator,
                  pair: tuple[int, int] | None = None) -> bool:
    """One exchange attempt.  Picks an ordered pair (payer, receiver)
    uniformly among distinct agents (or uses ``pair``), draws the amount
    per the rule, and applies it unless the payer would drop below the
    floor.  Returns True if the transfer was applied."""
    n = ens.n
    if pair is None:
        if n < 2:
            return False
        i = int(rng.integers(n))
        j = int(rng.integers(n - 1))
        if j >= i:
            j += 1
    else:
        i, j = pair
        if i == j:
            raise DomainError("payer and receiver must differ")
    amount = _draw_amount(rule, rng)
    if ens.balances[i] - amount < rule.floor:
        return False
    ens.balances[i] -= amount
    ens.balances[j] += amount
    return True


def _run_round(balances: np.ndarray, rule: ExchangeRule,
               rng: np.random.Generator) -> None:
    """Apply floor(N/2) disjoint-pair exchange attempts in place."""
    n = balances.size
    half = n // 2
    perm = rng.permutation(n)
    payers = perm[:half]
    receivers = perm[half:2 * half]
    if rule.kind == RULE_FIXED:
        amounts = np.full(half, rule.delta, dtype=np.int64)
    else:
        amounts = rng.integers(1, rule.delta + 1, size=half)
    ok = balances[payers] - amounts >= rule.floor
    balances[payers[ok]] -= amounts[ok]
    balances[receivers[ok]] += amounts[ok]


@dataclass
class BinnedHistogram:
    """Occupation counts over uniform bins of width ``bin_width`` starting
    at ``origin`` (the floor in debt mode)."""

    counts: np.ndarray
    bin_width: float = 1.0
    origin: float = 0.0

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.bin_width <= 0:
            raise DomainError("bin width must be positive")
        if np.any(self.counts < 0):
            raise DomainError("bin counts must be non-negative")

    @property
    def n_total(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_ensemble(cls, ens: AgentEnsemble, bin_width: int = 1,
                      origin: int | None = None) -> "BinnedHistogram":
        origin = int(ens.balances.min()) if origin is None else origin
        idx = (ens.balances - origin) // bin_width
        if np.any(idx < 0):
            raise DomainError("origin must not exceed the minimum balance")
        return cls(np.bincount(idx), float(bin_width), float(origin))

    def bin_lowers(self) -> np.ndarray:
        return self.origin + self.bin_width * np.arange(self.counts.size)


def entropy(hist: BinnedHistogram) -> float:
    """S = -sum_k N_k ln(N_k / N), with 0 ln 0 = 0."""
    n = hist.n_total
    if n < 1:
        raise DomainError("entropy of an empty histogram is undefined")
    nz = hist.counts[hist.counts > 0].astype(float)
    return float(-(nz * np.log(nz / n)).sum()) + 0.0   # avoid -0.0


_EXACT_LIMIT = 20


def multiplicity_exact(occupations) -> tuple[int, float]:
    """Exact multiplicity N!/(N_1! N_2! ...) and its log, for small N.

    Restricted to sum(occupations) <= 20 where exact factorials are the
    point; use :func:`entropy` (the Stirling form) beyond that.
    """
    occ = [int(v) for v in occupations]
    if any(v < 0 for v in occ):
        raise DomainError("occupation numbers must be non-negative")
    n = sum(occ)
    if n < 1:
        raise DomainError("need at least one agent")
    if n > _EXACT_LIMIT:
        raise DomainError(f"exact multiplicity limited to N <= {_EXACT_LIMIT}; got N={n}")
    omega = math.factorial(n)
    for v in occ:
        omega //= math.factorial(v)
    return omega, math.log(omega)


def temperature_and_potential(ens: AgentEnsemble, m_star: float = 1.0) -> tuple[float, float]:
    """Money temperature T = M/N and chemical potential mu = -T ln(T/m*).

    ``m_star`` is the money value of one quantum (= the histogram bin
    width); T and mu come back in the same money units.
    """
    if m_star <= 0:
        raise DomainError("quantum size must be positive")
    if ens.total <= 0:
        raise DomainError("chemical potential undefined for non-positive total money")
    T = ens.total / ens.n * m_star
    mu = -T * math.log(T / m_star)
    return T, mu


@dataclass(frozen=True)
class SimulationConfig:
    """Complete, serialisable description of one simulation run.

    ``delta`` of None resolves to 1 for the fixed rule and to twice the
    average balance for the uniform rule.  ``quantum_value`` is the money
    value of one quantum and only scales reported outputs.
    """

    n_agents: int
    total_money_quanta: int
    steps: int
    seed: int
    rule: str = RULE_UNIFORM
    delta: int | None = None
    floor: int = 0
    quantum_value: float = 1.0
    checkpoint_every: int | None = None

    def __post_init__(self):
        if self.quantum_value <= 0:
            raise DomainError("quantum value must be positive")
        self.exchange_rule()   # validates rule/delta/floor

    def resolved_delta(self) -> int:
        if self.delta is not None:
            return self.delta
        if self.rule == RULE_FIXED:
            return 1
        return max(1, round(2 * self.total_money_quanta / self.n_agents))

    def exchange_rule(self) -> ExchangeRule:
        return ExchangeRule(self.rule, delta=self.resolved_delta(),
                            floor=self.floor)

    def build_ensemble(self) -> AgentEnsemble:
        return init_ensemble(self.n_agents, self.total_money_quanta)

    def to_json(self) -> str:
        return json.dumps({
            "n_agents": self.n_agents,
            "total_money_quanta": self.total_money_quanta,
            "quantum_value": self.quantum_value,
            "rule": self.rule,
            "delta": self.resolved_delta(),
            "floor": self.floor,
            "steps": self.steps,
            "seed": self.seed,
            "checkpoint_every": self.checkpoint_every,
        })

    @classmethod
    def from_json(cls, text: str) -> "SimulationConfig":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"bad simulation config JSON: {exc}") from exc
        try:
            return cls(
                n_agents=int(obj["n_agents"]),
                total_money_quanta=int(obj["total_money_quanta"]),
                steps=int(obj["steps"]),
                seed=int(obj["seed"]),
                rule=obj.get("rule", RULE_UNIFORM),
                delta=None if obj.get("delta") is None else int(obj["delta"]),
                floor=int(obj.get("floor", 0)),
                quantum_value=float(obj.get("quantum_value", 1.0)),
                checkpoint_every=(None if obj.get("checkpoint_every") is None
                                  else int(obj["checkpoint_every"])),
            )
        except KeyError as exc:
            raise DomainError(f"simulation config missing key {exc}") from exc


def run_from_config(config: SimulationConfig) -> "Trajectory":
    """Build the ensemble from the config and run it to completion."""
    ens = config.build_ensemble()
    return run_simulation(ens, config.exchange_rule(), config.steps,
                          checkpoint_every=config.checkpoint_every,
                          seed=config.seed)


@dataclass
class Trajectory:
    """Checkpoint record of a simulation run."""

    steps: np.ndarray
    entropy: np.ndarray
    temperature: np.ndarray
    final_histogram: BinnedHistogram
    ensemble: AgentEnsemble

    def rows(self):
        return list(zip(self.steps.tolist(), self.entropy.tolist(),
                        self.temperature.tolist()))


def run_simulation(ens: AgentEnsemble, rule: ExchangeRule, steps: int,
                   checkpoint_every: int | None = None, *,
                   seed: int | None = None,
                   rng: np.random.Generator | None = None,
                   bin_width: int = 1) -> Trajectory:
    """Run ``steps`` exchange attempts on the ensemble (mutated in place).

    Attempts execute in rounds of N//2 disjoint pairs; checkpoints land on
    the first round boundary at or past each multiple of
    ``checkpoint_every`` and record the entropy of the balance histogram
    (bins of ``bin_width`` quanta anchored at the rule floor) and the
    temperature M/N in quanta.  The step counts reported are exact attempt
    counts.  Total money is asserted at every checkpoint.
    """
    if steps < 1:
        raise DomainError("need at least one step")
    if ens.n < 2:
        raise DomainError("need at least two agents to trade")
    if rng is None:
        rng = np.random.default_rng(seed)
    per_round = ens.n // 2
    n_rounds = -(-steps // per_round)  # ceil
    if checkpoint_every is None:
        checkpoint_rounds = n_rounds
    else:
        checkpoint_rounds = max(1, checkpoint_every // per_round)

    total_before = ens.total
    balances = ens.balances

    def checkpoint(done_rounds, out):
        hist = BinnedHistogram.from_ensemble(ens, bin_width, origin=rule.floor)
        out.append((done_rounds * per_round, entropy(hist), ens.total / ens.n))

    records: list[tuple[int, float, float]] = []
    checkpoint(0, records)
    done = 0
    while done < n_rounds:
        burst = min(checkpoint_rounds, n_rounds - done)
        for _ in range(burst):
            _run_round(balances, rule, rng)
        done += burst
        if ens.total != total_before:
            raise ConfigurationError("money conservation violated; this is a bug")
        if np.any(balances < rule.floor):
            raise ConfigurationError("floor violated; this is a bug")
        checkpoint(done, records)

    arr = np.asarray(records, dtype=float)
    return Trajectory(
        steps=arr[:, 0].astype(np.int64),
        entropy=arr[:, 1],
        temperature=arr[:, 2],
        final_histogram=BinnedHistogram.from_ensemble(ens, bin_width, origin=rule.floor),
        ensemble=ens,
    )


# ---------------------------------------------------------------------------
# Coupled systems: money flux and migration
# ---------------------------------------------------------------------------


@dataclass
class FluxReport:
    """Net fluxes from system 1 to system 2 and the linear-response
    entropy-change estimate computed with the initial temperatures."""

    delta_money: int
    delta_agents: int
    delta_entropy_estimate: float
    t1_initial: float
    t2_initial: float
    t1_final: float
    t2_final: float
    events: int
    exchanges_accepted: int
    migrations_accepted: int

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)


def couple_systems(ens1: AgentEnsemble, ens2: AgentEnsemble,
                   rule: ExchangeRule, steps: int, migration_rate: float,
                   *, seed: int | None = None,
                   rng: np.random.Generator | None = None) -> FluxReport:
    """Couple two ensembles for ``steps`` events and report net fluxes.

    Each event is a migration with probability ``migration_rate`` (a
    uniformly chosen agent attempts to move to the other system, carrying
    its balance) and otherwise a cross-system money exchange (an ordered
    cross pair chosen uniformly, transfer per ``rule``).

    A migration is accepted with the Metropolis probability built from
    the population term of the entropy gradient, ln(T_dst/T_src) at the
    current temperatures; this drives the net agent flow toward the
    higher-temperature system, i.e. from high to low chemical potential.
    The money term of the gradient belongs to the exchange channel and is
    deliberately not charged to migrations.

    Flux signs are 1 -> 2 positive.  The entropy estimate is
    (1/T2 - 1/T1) dM + ln(T2/T1) dN at the initial temperatures, the
    differential (linear-response) form; measure while the temperature
    gap persists, roughly steps of order the system size.
    """
    if not 0 <= migration_rate <= 1:
        raise DomainError("migration rate must lie in [0, 1]")
    if steps < 1:
        raise DomainError("need at least one event")
    if rng is None:
        rng = np.random.default_rng(seed)

    b1 = ens1.balances.tolist()
    b2 = ens2.balances.tolist()
    m1, m2 = sum(b1), sum(b2)
    t1_0, t2_0 = m1 / len(b1), m2 / len(b2)
    if t1_0 <= 0 or t2_0 <= 0:
        raise DomainError("both systems need positive money temperatures")

    d_money = 0
    d_agents = 0
    n_exchanges = 0
    n_migrations = 0
    for _ in range(steps):
        if rng.random() < migration_rate:
            n1, n2 = len(b1), len(b2)
            k = int(rng.integers(n1 + n2))
            t1, t2 = m1 / n1, m2 / n2
            if k < n1:
                if n1 < 2:
                    continue
                ds = math.log(t2 / t1)
                if ds >= 0 or rng.random() < math.exp(ds):
                    m = b1[k]
                    b1[k] = b1[-1]
                    b1.pop()
                    b2.append(m)
                    m1 -= m
                    m2 += m
                    d_agents += 1
                    d_money += m
                    n_migrations += 1
            else:
                if n2 < 2:
                    continue
                idx = k - n1
                ds = math.log(t1 / t2)
                if ds >= 0 or rng.random() < math.exp(ds):
                    m = b2[idx]
                    b2[idx] = b2[-1]
                    b2.pop()
                    b1.append(m)
                    m2 -= m
                    m1 += m
                    d_agents -= 1
                    d_money -= m
                    n_migrations += 1
        else:
            # ordered cross pair, uniform: payer side is a fair coin
            if rng.random() < 0.5:
                src, dst, sign = b1, b2, 1
            else:
                src, dst, sign = b2, b1, -1
            i = int(rng.integers(len(src)))
            j = int(rng.integers(len(dst)))
            amount = _draw_amount(rule, rng)
            if src[i] - amount >= rule.floor:
                src[i] -= amount
                dst[j] += amount
                if sign == 1:
                    m1 -= amount
                    m2 += amount
                else:
                    m2 -= amount
                    m1 += amount
                d_money += sign * amount
                n_exchanges += 1

    ens1.balances = np.asarray(b1, dtype=np.int64)
    ens2.balances = np.asarray(b2, dtype=np.int64)
    ds_est = (1.0 / t2_0 - 1.0 / t1_0) * d_money + math.log(t2_0 / t1_0) * d_agents
    return FluxReport(
        delta_money=d_money,
        delta_agents=d_agents,
        delta_entropy_estimate=ds_est,
        t1_initial=t1_0,
        t2_initial=t2_0,
        t1_final=m1 / len(b1),
        t2_final=m2 / len(b2),
        events=steps,
        exchanges_accepted=n_exchanges,
        migrations_accepted=n_migrations,
    )


# ---------------------------------------------------------------------------
# Thermal-cycle accounting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CycleSpec:
    """Closed trading cycle: buy volume v2 - v1 at price p2, sell at p1,
    between systems at temperatures t1 > t2."""

    p1: float
    p2: float
    v1: float
    v2: float
    t1: float
    t2: float

    def __post_init__(self):
        if self.p2 <= 0 or self.p1 <= self.p2:
            raise DomainError("need prices p1 > p2 > 0")
        if self.v1 < 0 or self.v2 <= self.v1:
            raise DomainError("need volumes v2 > v1 >= 0")
        if self.t2 <= 0 or self.t1 < self.t2:
            raise DomainError("need temperatures t1 >= t2 > 0")


def cycle_profit_and_rate(cycle: CycleSpec) -> tuple[float, float]:
    """Wealth gained per cycle, (p1-p2)(v2-v1), and the profit rate
    (t1-t2)/t2 set by the temperature ratio (the no-arbitrage bound)."""
    profit = (cycle.p1 - cycle.p2) * (cycle.v2 - cycle.v1)
    rate = (cycle.t1 - cycle.t2) / cycle.t2
    return profit, rate
