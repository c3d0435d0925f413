"""Global solvability and hypoellipticity toolkit for evolution operators
d/dt + c(t) X + q on the product of a circle with a compact group, driven by
concrete spectral models.

The package decides whether such an operator is globally hypoelliptic,
solves the equation mode by mode in closed form, constructs explicit
singular solutions when hypoellipticity fails, and classifies the decay of
the resulting coefficient fields.  A declarative command-line front end
(``hypoell --job <file>``) exposes all of it with deterministic artifacts.
"""

from .analysis import (DecayClass, DecayProfile, decay_classify,
                       default_battery, distribution_pairing,
                       plancherel_norm, synthesize_torus)
from .classifier import (ConstantPartStatus, Decision, Verdict, classify,
                         explain)
from .counterexamples import (CheckItem, CounterexampleReport, ModeRecord,
                              VerificationSummary, homogeneous_resonant,
                              sign_change_singular, small_gap_singular,
                              verify_report)
from .diophantine import (ArithmeticInput, DiophantineReport, ExpGap,
                          LiouvilleClass, LiouvilleReport, ResonantVerdict,
                          exp_gap, liouville_probe, lower_bound_scan,
                          resonant_set, split_q)
from .errors import (DomainError, HypoellError, InsufficientData,
                     KernelOverflow, ModelError, NoGrowthSequence,
                     RecipeInapplicable, ResonanceObstruction, Rigor)
from .fields import CoefficientField, GridFn, grid_points
from .modesolver import (BranchPolicy, GaugeDirection, ModeIssue,
                         ModeSolution, gauge_transform, solve_field,
                         solve_periodic_scalar)
from .spectra import SU2, CustomTable, RepPoint, SpectralModel, Torus1
from .torusfn import (TWO_PI, SignVerdict, TrigPoly, WindowExtremum,
                      min_im_window, sign_certificate, window_integral)

__version__ = "0.1.0"

__all__ = [
    "TWO_PI", "TrigPoly", "SignVerdict", "WindowExtremum",
    "min_im_window", "sign_certificate", "window_integral",
    "SpectralModel", "Torus1", "SU2", "CustomTable", "RepPoint",
    "GridFn", "CoefficientField", "grid_points",
    "BranchPolicy", "GaugeDirection", "ModeIssue", "ModeSolution",
    "solve_periodic_scalar", "solve_field", "gauge_transform",
    "ArithmeticInput", "DiophantineReport", "ResonantVerdict", "ExpGap",
    "LiouvilleClass", "LiouvilleReport", "split_q", "resonant_set",
    "exp_gap", "lower_bound_scan", "liouville_probe",
    "Decision", "Rigor", "ConstantPartStatus", "Verdict", "classify",
    "explain",
    "DecayClass", "DecayProfile", "decay_classify", "plancherel_norm",
    "synthesize_torus", "distribution_pairing", "default_battery",
    "ModeRecord", "CheckItem", "CounterexampleReport",
    "VerificationSummary", "homogeneous_resonant", "small_gap_singular",
    "sign_change_singular", "verify_report",
    "HypoellError", "ModelError", "DomainError", "ResonanceObstruction",
    "KernelOverflow", "RecipeInapplicable", "NoGrowthSequence",
    "InsufficientData",
    "__version__",
]
