"""Statistical mechanics of inequality.

Kinetic money-exchange simulation relaxing to the Boltzmann-Gibbs
distribution, stationary income diffusion with additive and
multiplicative components, the two-class income fitting pipeline, and
population-weighted energy-consumption analytics (CDF, Lorenz, Gini).
"""

__version__ = "0.1.0"

from .distributions import (TwoClassModel, LorenzCurve, two_class_pdf,
                            two_class_cdf, lorenz_exponential,
                            lorenz_two_class, sample_lorenz_curve,
                            gini_from_curve, tail_fraction, class_boundary)
from .energy import (CountryRecord, DropReport, SlopeProfile, ingest_wri,
                     per_capita_kw, weighted_cdf, world_average,
                     lorenz_energy, slope_profile)
from .errors import (IneqStatsError, DomainError, InsufficientDataError,
                     NoIntersectionError, SingularDiffusionError,
                     ConfigurationError, MalformedCurveError,
                     DegenerateCurveError, FormatError, EmptyJoinError)
from .fokker_planck import (DriftDiffusionSpec, GridDistribution, make_grid,
                            stationary_solution, evolve_transient,
                            delta_r2_diagnostic, alpha_from_coefficients)
from .income import (IncomeBinTable, FitReport, TemperatureFit, ParetoFit,
                     CrossoverFit, empirical_cdf_income, fit_temperature,
                     fit_pareto_exponent, fit_crossover, refine_parameters,
                     fit_report, sample_income_table)
from .kinetic import (AgentEnsemble, ExchangeRule, BinnedHistogram, CycleSpec,
                      FluxReport, SimulationConfig, Trajectory, init_ensemble,
                      exchange_step, run_simulation, run_from_config, entropy,
                      multiplicity_exact, temperature_and_potential,
                      couple_systems, cycle_profit_and_rate, RULE_FIXED,
                      RULE_UNIFORM)
from .weighted import WeightedCDF

__all__ = [name for name in dir() if not name.startswith("_")]
