"""fejercert: explicit convergence certificates for Fejer monotone
iterations, the iteration schemes they govern, and an empirical checker
that validates every certificate against actual trajectories."""

__version__ = "0.1.0"

from .moduli import (
    ApproximationFamily,
    ClosednessModuli,
    FejerModulus,
    GHModuli,
    Modulus,
    diameter_witness,
    majorant,
    modulus_i_to_ii,
    modulus_ii_to_i,
    tb_modulus_ball,
    tb_modulus_closure,
    tb_modulus_convex_hull,
    tb_modulus_interval,
    uniform_closedness_cond_e,
    uniform_closedness_from_continuity,
)
from .rates import (
    CapExceeded,
    Certificate,
    EvalBudget,
    LiminfBound,
    RateInputs,
    omega,
    omega_tilde,
    psi,
    psi_hat,
    psi_plus,
    psi_tilde,
)
from .scenario import Scenario, ScenarioError, build_certificate, build_runtime, parse_scenario

__all__ = [
    "ApproximationFamily",
    "CapExceeded",
    "Certificate",
    "ClosednessModuli",
    "EvalBudget",
    "FejerModulus",
    "GHModuli",
    "LiminfBound",
    "Modulus",
    "RateInputs",
    "Scenario",
    "ScenarioError",
    "build_certificate",
    "build_runtime",
    "diameter_witness",
    "majorant",
    "modulus_i_to_ii",
    "modulus_ii_to_i",
    "omega",
    "omega_tilde",
    "parse_scenario",
    "psi",
    "psi_hat",
    "psi_plus",
    "psi_tilde",
    "tb_modulus_ball",
    "tb_modulus_closure",
    "tb_modulus_convex_hull",
    "tb_modulus_interval",
    "uniform_closedness_cond_e",
    "uniform_closedness_from_continuity",
]
