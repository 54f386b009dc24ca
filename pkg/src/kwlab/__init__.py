"""kwlab: blow-up vs. global existence lab for damped wave equations
with kinetic (dynamic) boundary conditions on an annulus.

The package has three layers:

* parameter-space classification (:mod:`kwlab.regimes`, :mod:`kwlab.model`)
  deciding, from exponents and damping/source weights alone, whether a
  configuration is covered by the global-existence or blow-up criteria;
* an energy-consistent radial/angular finite-difference simulator
  (:mod:`kwlab.geometry`, :mod:`kwlab.functionals`, :mod:`kwlab.solver`)
  that tracks the energy identity and detects finite-time blow-up;
* a scalar ODE oracle (:mod:`kwlab.oracle`) with a quadrature-exact
  blow-up time, used to cross-check the detector.
"""

from .functionals import (
    K,
    REPORT_COLUMNS,
    EnergyReport,
    LyapunovConfig,
    State,
    default_k,
    dissipation_rate,
    energy_E,
    energy_identity_residual,
    lyapunov_Z,
    make_report,
    potential_J,
)
from .geometry import AnnulusMesh, build_annulus
from .model import AssumptionReport, ModelParams, check_assumptions
from .oracle import OdeProblem, blowup_time, integrate_comparison
from .regimes import (
    VERDICTS,
    CriticalExponents,
    RegimeVerdict,
    classify,
    critical_exponents,
)
from .solver import BlowupReport, SimConfig, negative_energy_data, simulate

__version__ = "0.1.0"

__all__ = [
    "AnnulusMesh",
    "AssumptionReport",
    "BlowupReport",
    "CriticalExponents",
    "EnergyReport",
    "K",
    "LyapunovConfig",
    "ModelParams",
    "OdeProblem",
    "REPORT_COLUMNS",
    "RegimeVerdict",
    "SimConfig",
    "State",
    "VERDICTS",
    "blowup_time",
    "build_annulus",
    "check_assumptions",
    "classify",
    "critical_exponents",
    "default_k",
    "dissipation_rate",
    "energy_E",
    "energy_identity_residual",
    "integrate_comparison",
    "lyapunov_Z",
    "make_report",
    "negative_energy_data",
    "potential_J",
    "simulate",
]
