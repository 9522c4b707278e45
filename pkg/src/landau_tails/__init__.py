"""Lifshits-tail toolkit for the 2-D random Landau Hamiltonian.

Computes, bounds, and cross-validates the low-energy asymptotics of the
integrated density of states for Poissonian repulsive impurities:

- ``potentials``: physical parameters and the impurity-potential catalogue
  with analytic decay classification,
- ``regvar``: calculus of slowly/regularly varying functions (de Bruijn
  conjugates, asymptotic inverses, Potter bounds),
- ``laplace``: Poisson Laplace functionals, Gaussian convolution, and the
  sandwich bounds on the shifted Laplace-Stieltjes transform,
- ``classical_idos``: reproducible Monte Carlo for the potential at the
  origin and the classical integrated density of states,
- ``tauberian``: the exponential Tauberian converter between Laplace-side
  and energy-side asymptotics,
- ``tails``: the closed-form tail predictors and the unperturbed staircase,
- ``cli``: command-line front end emitting CSV/JSON datasets.
"""

from .potentials import (
    Algebraic,
    AlgebraicLog,
    CompactDisk,
    DecayClass,
    GaussianPotential,
    LandauParams,
    LogCorrectedGaussian,
    PotentialModel,
    RegularDecayDescriptor,
    StretchedGaussian,
    classify_decay,
    model_from_dict,
    model_to_dict,
    regular_decay_of,
)
from .regvar import (
    ConstantFn,
    ExpLogPower,
    IterLogProduct,
    OpaqueSlowVar,
    RegVarFn,
    SlowVar,
    asymptotic_inverse,
    de_bruijn_conjugate,
    verify_conjugate_pair,
)
from .laplace import (
    ConvolvedProfile,
    QuadratureSpec,
    SandwichResult,
    gaussian_convolve,
    laplace_functional,
    sandwich_bounds,
    sandwich_sweep,
)
from .classical_idos import (
    IdosEstimate,
    PoissonConfig,
    PoissonSample,
    draw_v_origin,
    estimate_Nc,
    laplace_mc_crosscheck,
    sample_field,
    tail_exponent_fit,
    truncation_radius,
)
from .tauberian import (
    IdosAsymptote,
    LaplaceAsymptote,
    backward,
    forward,
    forward_gamma0,
    log_laplace_stieltjes,
    roundtrip_check,
)
from .tails import (
    AsymptoticTail,
    TailBracket,
    compare_tail_to_bound_chain,
    gaussian_bracket,
    lifshitz_constant,
    predict_subgaussian,
    predict_supergaussian,
    predict_tail,
    staircase_N0,
)

__version__ = "1.0.0"
