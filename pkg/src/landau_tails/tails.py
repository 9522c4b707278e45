"""Closed-form low-energy tail asymptotes of the integrated density of states.

Three regimes by impurity decay class:

  super-Gaussian:  log N(eps0+E) ~ -2 pi rho ell^2 |log E|
  Gaussian:        only a bracket of |log E| coefficients is known
  regular sub-Gaussian (F, alpha):
      log N(eps0+E) ~ -C(alpha, rho) E^{2/(2-alpha)} f#(E^{alpha/(2-alpha)}),
      f(t) = [t^{-1/alpha} F(t)]^{2 alpha/(2-alpha)},
      reducing at alpha = inf to -pi rho f#(1/E) with f = F^{-2}.

The sub-Gaussian tail is independent of the magnetic field and of Planck's
constant; it is shared with the classical integrated density of states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .laplace import QuadratureSpec, abfall_limit_constant, gamma_function, sandwich_sweep
from .potentials import (
    DecayClass,
    LandauParams,
    PotentialModel,
    RegularDecayDescriptor,
    classify_decay,
    regular_decay_of,
)
from .regvar import (
    ConstantFn,
    IterLogProduct,
    SlowVar,
    de_bruijn_conjugate,
    pow_slowvar,
    slowvar_to_json,
)

__all__ = [
    "AsymptoticTail",
    "TailBracket",
    "lifshitz_constant",
    "predict_subgaussian",
    "predict_supergaussian",
    "gaussian_bracket",
    "predict_tail",
    "staircase_N0",
    "compare_tail_to_bound_chain",
]


@dataclass(frozen=True)
class AsymptoticTail:
    """log N(eps0+E) = -amplitude * E^energy_power * slow((1/E)^arg_power).

    slow = None means no slowly varying factor. The |log E| forms are
    expressed through slow factors evaluated at 1/E (so log(1/E) = |log E|).
    """

    amplitude: float
    energy_power: float = 0.0
    slow: SlowVar | None = None
    arg_power: float = 1.0

    def __post_init__(self):
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")
        if self.energy_power > 0:
            raise ValueError("energy power must be <= 0 (fall-off at E -> 0)")
        if self.arg_power <= 0:
            raise ValueError("arg_power must be positive")

    def log_n(self, E: float) -> float:
        """The asymptote at energy eps0 + E, negative for small E."""
        if E <= 0:
            raise ValueError("E must be positive")
        factor = self.slow((1.0 / E) ** self.arg_power) if self.slow else 1.0
        return -self.amplitude * E**self.energy_power * factor

    def ratio_to(self, other: "AsymptoticTail", E: float) -> float:
        return self.log_n(E) / other.log_n(E)

    def canonical_form(self) -> tuple[float, float, float]:
        """(amplitude, E power, |log E| power) when the slow factor folds.

        Folds constants and single-exponent log factors exactly, including
        the argument power: (log u^k)^b = k^b (log u)^b. Raises for deeper
        iterated-log structure.
        """
        if self.slow is None:
            return (self.amplitude, self.energy_power, 0.0)
        if isinstance(self.slow, ConstantFn):
            return (self.amplitude * self.slow.c, self.energy_power, 0.0)
        if isinstance(self.slow, IterLogProduct):
            exps = self.slow.exps
            if len(exps) == 1 or all(a == 0.0 for a in exps[1:]):
                b = exps[0]
                amp = self.amplitude * self.slow.a0 * self.arg_power**b
                return (amp, self.energy_power, b)
        raise ValueError("slow factor does not fold to a pure |log E| power")

    def to_json(self) -> dict:
        out = {
            "amplitude": self.amplitude,
            "energy_power": self.energy_power,
            "arg_power": self.arg_power,
        }
        if self.slow is not None:
            out["slow"] = slowvar_to_json(self.slow)
        return out


@dataclass(frozen=True)
class TailBracket:
    """Known |log E| bracket for Gaussian decay; the exact tail is open.

    Coefficients multiply -|log E|: the lower bound falls off at least as
    fast as lower_coeff, the upper at most as slowly as upper_coeff.
    """

    lower_coeff: float
    upper_coeff: float

    def __post_init__(self):
        if self.lower_coeff < self.upper_coeff:
            raise ValueError("bracket ordering violated (lower falls off faster)")

    @property
    def lower(self) -> AsymptoticTail:
        return AsymptoticTail(self.lower_coeff, 0.0, IterLogProduct(1.0, (1.0,)))

    @property
    def upper(self) -> AsymptoticTail:
        return AsymptoticTail(self.upper_coeff, 0.0, IterLogProduct(1.0, (1.0,)))


def lifshitz_constant(alpha: float, rho: float) -> float:
    """C(alpha, rho) = (alpha-2)/2 [2 pi rho / alpha * Gamma((alpha-2)/alpha)]^(alpha/(alpha-2))."""
    if not (2.0 < alpha < math.inf):
        raise ValueError("alpha must be finite and exceed 2")
    if rho <= 0:
        raise ValueError("rho must be positive")
    base = 2.0 * math.pi * rho / alpha * gamma_function((alpha - 2.0) / alpha)
    return (alpha - 2.0) / 2.0 * base ** (alpha / (alpha - 2.0))


def predict_subgaussian(descriptor: RegularDecayDescriptor,
                        rho: float) -> AsymptoticTail:
    """The regular sub-Gaussian tail from the (F, alpha) descriptor."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    alpha = descriptor.alpha
    F = descriptor.F
    if math.isinf(alpha):
        # f = F^-2 with F itself slowly varying
        if F.gamma != 0.0:
            raise ValueError("alpha = inf requires a slowly varying F")
        f = pow_slowvar(F.slow, -2.0)
        return AsymptoticTail(math.pi * rho, 0.0, de_bruijn_conjugate(f), 1.0)
    # f(t) = [t^{-1/alpha} F(t)]^{2 alpha/(2-alpha)}; the t powers must cancel
    if abs(F.gamma - 1.0 / alpha) > 1e-12:
        raise ValueError("index of F inconsistent with alpha: residual power")
    q = 2.0 * alpha / (2.0 - alpha)
    f = pow_slowvar(F.slow, q)
    conj = de_bruijn_conjugate(f)
    return AsymptoticTail(
        amplitude=lifshitz_constant(alpha, rho),
        energy_power=2.0 / (2.0 - alpha),
        slow=conj,
        arg_power=alpha / (alpha - 2.0),  # slow factor at E^{alpha/(2-alpha)} = (1/E)^this
    )


def predict_supergaussian(rho: float, landau: LandauParams) -> AsymptoticTail:
    """-2 pi rho ell^2 |log E|: all super-Gaussian decays share this tail.

    The coefficient is the mean impurity count in a disk of radius
    sqrt(2) ell; it carries the magnetic field through ell.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    coeff = 2.0 * math.pi * rho * landau.magnetic_length**2
    return AsymptoticTail(coeff, 0.0, IterLogProduct(1.0, (1.0,)))


def gaussian_bracket(rho: float, lam: float, landau: LandauParams,
                     sharp: bool = False) -> TailBracket:
    """|log E| coefficient bracket for Gaussian decay with length lam.

    Plain bracket: [pi rho (lam^2 + 2 ell^2), 2 pi rho ell^2]. For definite
    Gaussian decay the upper coefficient sharpens to pi rho max(lam^2, 2 ell^2).
    """
    if rho <= 0 or lam <= 0:
        raise ValueError("rho and lam must be positive")
    ell2 = landau.magnetic_length**2
    lower = math.pi * rho * (lam**2 + 2.0 * ell2)
    upper = math.pi * rho * max(lam**2, 2.0 * ell2) if sharp else 2.0 * math.pi * rho * ell2
    return TailBracket(lower, upper)


def predict_tail(model: PotentialModel, landau: LandauParams, rho: float,
                 sharp_gaussian: bool = True):
    """Dispatch on the decay class: tail, bracket, or None (out of scope)."""
    decay = classify_decay(model)
    if decay.kind == "super_gaussian":
        return predict_supergaussian(rho, landau)
    if decay.kind == "gaussian":
        return gaussian_bracket(rho, decay.gaussian_length, landau, sharp_gaussian)
    descriptor = regular_decay_of(model)
    if descriptor is None:
        return None  # sub-Gaussian without regular decay: theorems do not apply
    return predict_subgaussian(descriptor, rho)


def staircase_N0(E: float, landau: LandauParams) -> float:
    """Unperturbed staircase: (1/2 pi ell^2) #{n >= 0 : (2n+1) eps0 < E}."""
    eps0 = landau.lowest_level
    if E <= eps0:
        return 0.0
    n_below = int(math.ceil((E / eps0 - 1.0) / 2.0 - 1e-15))
    return landau.degeneracy_per_area * n_below


def compare_tail_to_bound_chain(model: PotentialModel, landau: LandauParams,
                                rho: float, t_grid,
                                spec: QuadratureSpec | None = None) -> dict:
    """log(sandwich bound)/F(t)^2 for both bounds against -pi rho Gamma((alpha-2)/alpha).

    The end-to-end numerical validation of the sub-Gaussian proof chain:
    both bounds on the shifted Laplace-Stieltjes transform share the F(t)^2
    asymptote with the limit constant from the decay integral.
    """
    descriptor = regular_decay_of(model)
    if descriptor is None:
        raise ValueError("model has no regular-decay descriptor")
    target = -rho * abfall_limit_constant(descriptor.alpha)
    results = sandwich_sweep(model, landau, rho, t_grid, spec)
    rows = []
    for res in results:
        F2 = descriptor.F(res.t) ** 2
        rows.append({
            "t": res.t,
            "lower_ratio": res.log_lower / F2,
            "upper_ratio": res.log_upper / F2,
            "L_U": res.L_U,
            "L_conv": res.L_conv,
        })
    return {"target": target, "alpha": descriptor.alpha, "rows": rows}
