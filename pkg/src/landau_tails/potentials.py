"""Physical parameter set and the catalogue of single-impurity potentials.

Each potential family carries its analytic decay classification and, where
applicable, the regular-decay descriptor (F, alpha) used by the tail
predictors. All potentials are radial; the asymptotic forms are taken as the
exact definitions (no o(1) correction factors).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .regvar import ConstantFn, IterLogProduct, RegVarFn

__all__ = [
    "LandauParams",
    "PotentialModel",
    "CompactDisk",
    "GaussianPotential",
    "LogCorrectedGaussian",
    "StretchedGaussian",
    "Algebraic",
    "AlgebraicLog",
    "DecayClass",
    "RegularDecayDescriptor",
    "evaluate_potential",
    "classify_decay",
    "regular_decay_of",
    "check_regular_decay",
    "potential_integral",
    "model_from_dict",
    "model_to_dict",
    "CATALOGUE_FAMILIES",
]


@dataclass(frozen=True)
class LandauParams:
    """Mass, charge magnitude, field strength, and Planck's constant.

    Derived quantities: magnetic length ell = sqrt(hbar/(|Q| B)), lowest
    Landau level eps0 = hbar |Q| B / (2 m), and the per-area degeneracy
    1/(2 pi ell^2) of each Landau level.
    """

    mass: float = 1.0
    charge: float = 1.0
    field: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("mass", "charge", "field", "hbar"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def magnetic_length(self) -> float:
        return math.sqrt(self.hbar / (self.charge * self.field))

    @property
    def lowest_level(self) -> float:
        return self.hbar * self.charge * self.field / (2.0 * self.mass)

    @property
    def degeneracy_per_area(self) -> float:
        return 1.0 / (2.0 * math.pi * self.magnetic_length**2)


@dataclass(frozen=True)
class DecayClass:
    """Super-Gaussian, Gaussian (with decay length), or sub-Gaussian.

    The classes partition by the essential limsup of log U(x)/|x|^2:
    -inf, -1/lambda^2, or 0.
    """

    kind: str  # "super_gaussian" | "gaussian" | "sub_gaussian"
    gaussian_length: float | None = None

    def __post_init__(self):
        if self.kind not in ("super_gaussian", "gaussian", "sub_gaussian"):
            raise ValueError(f"unknown decay class {self.kind!r}")
        if (self.kind == "gaussian") != (self.gaussian_length is not None):
            raise ValueError("gaussian_length is required exactly for Gaussian decay")


@dataclass(frozen=True)
class RegularDecayDescriptor:
    """F strictly increasing, regularly varying of index 1/alpha; F -> inf."""

    F: RegVarFn
    alpha: float

    def __post_init__(self):
        if not (self.alpha > 2):
            raise ValueError("alpha must exceed 2 (or be inf)")
        expected = 0.0 if math.isinf(self.alpha) else 1.0 / self.alpha
        if abs(self.F.gamma - expected) > 1e-12:
            raise ValueError(
                f"index of F ({self.F.gamma}) inconsistent with alpha={self.alpha}"
            )


class PotentialModel:
    """Base class for the radial single-impurity potential families."""

    def evaluate(self, r):
        """U(r) for radius r >= 0 (scalar or array)."""
        raise NotImplementedError

    def decay_class(self) -> DecayClass:
        raise NotImplementedError

    def regular_decay(self) -> RegularDecayDescriptor | None:
        return None

    def monotone_tail_radius(self) -> float:
        """Radius beyond which U is non-increasing."""
        return 0.0

    def length_scale(self) -> float:
        """Characteristic length used to place numeric probe radii."""
        return 1.0

    def __call__(self, r):
        return self.evaluate(r)


def _require_positive(**kwargs):
    for name, value in kwargs.items():
        if value <= 0:
            raise ValueError(f"{name} must be strictly positive, got {value!r}")


@dataclass(frozen=True)
class CompactDisk(PotentialModel):
    """U(r) = g on r <= R, zero outside."""

    g: float = 1.0
    R: float = 1.0

    def __post_init__(self):
        _require_positive(g=self.g, R=self.R)

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        out = np.where(r <= self.R, self.g, 0.0)
        return out if out.ndim else float(out)

    def decay_class(self) -> DecayClass:
        # compact support: log U = -inf outside, hence super-Gaussian
        return DecayClass("super_gaussian")

    def length_scale(self) -> float:
        return self.R


@dataclass(frozen=True)
class GaussianPotential(PotentialModel):
    """U(r) = g exp(-r^2/lambda^2)."""

    g: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        _require_positive(g=self.g, lam=self.lam)

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        out = self.g * np.exp(-((r / self.lam) ** 2))
        return out if out.ndim else float(out)

    def decay_class(self) -> DecayClass:
        return DecayClass("gaussian", gaussian_length=self.lam)

    def length_scale(self) -> float:
        return self.lam

    def plane_integral(self) -> float:
        return self.g * math.pi * self.lam**2


@dataclass(frozen=True)
class LogCorrectedGaussian(PotentialModel):
    """U(r) = g exp[-r^2/(lambda^2 log(r/mu))] for r > e*mu.

    The long-distance form is continued inward by its value at r = e*mu,
    where log(r/mu) = 1; any positive bounded continuation is admissible.
    """

    g: float = 1.0
    lam: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        _require_positive(g=self.g, lam=self.lam, mu=self.mu)

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        r_eff = np.maximum(r, math.e * self.mu)
        out = self.g * np.exp(-(r_eff**2) / (self.lam**2 * np.log(r_eff / self.mu)))
        return out if out.ndim else float(out)

    def decay_class(self) -> DecayClass:
        return DecayClass("sub_gaussian")

    def regular_decay(self) -> RegularDecayDescriptor:
        # F(t) = lam * sqrt(log t * log sqrt(log t))
        #      = (lam/sqrt 2) * (log t)^(1/2) * (loglog t)^(1/2)
        slow = IterLogProduct(self.lam / math.sqrt(2.0), (0.5, 0.5))
        return RegularDecayDescriptor(RegVarFn(0.0, slow), math.inf)

    def monotone_tail_radius(self) -> float:
        # derivative of r^2/log(r/mu) is positive once log(r/mu) > 1/2;
        # the inward continuation starts at e*mu anyway
        return math.e * self.mu

    def length_scale(self) -> float:
        return max(self.lam, self.mu)


@dataclass(frozen=True)
class StretchedGaussian(PotentialModel):
    """U(r) = g exp[-(r/lambda)^beta] with 0 < beta < 2."""

    g: float = 1.0
    lam: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        _require_positive(g=self.g, lam=self.lam)
        if not 0.0 < self.beta < 2.0:
            raise ValueError(f"beta must lie in (0, 2), got {self.beta!r}")

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        out = self.g * np.exp(-((r / self.lam) ** self.beta))
        return out if out.ndim else float(out)

    def decay_class(self) -> DecayClass:
        return DecayClass("sub_gaussian")

    def regular_decay(self) -> RegularDecayDescriptor:
        # F(t) = lam (log t)^(1/beta)
        slow = IterLogProduct(self.lam, (1.0 / self.beta,))
        return RegularDecayDescriptor(RegVarFn(0.0, slow), math.inf)

    def length_scale(self) -> float:
        return self.lam


@dataclass(frozen=True)
class Algebraic(PotentialModel):
    """U(r) = min(g0 r^-alpha, core_cap) with alpha > 2.

    The cap keeps U locally square integrable; |x|^-alpha with alpha > 2
    is not in L^2_loc of the plane.
    """

    g0: float = 1.0
    alpha: float = 3.0
    core_cap: float | None = None

    def __post_init__(self):
        _require_positive(g0=self.g0, alpha=self.alpha)
        if self.alpha <= 2:
            raise ValueError(f"alpha must exceed 2, got {self.alpha!r}")
        if self.core_cap is None:
            object.__setattr__(self, "core_cap", 1e6 * self.g0)
        _require_positive(core_cap=self.core_cap)

    @property
    def cap_radius(self) -> float:
        return (self.g0 / self.core_cap) ** (1.0 / self.alpha)

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            out = np.where(
                r > self.cap_radius, self.g0 * r ** (-self.alpha), self.core_cap
            )
        return out if out.ndim else float(out)

    def decay_class(self) -> DecayClass:
        return DecayClass("sub_gaussian")

    def regular_decay(self) -> RegularDecayDescriptor:
        # F(t) = (g0 t)^(1/alpha)
        slow = ConstantFn(self.g0 ** (1.0 / self.alpha))
        return RegularDecayDescriptor(RegVarFn(1.0 / self.alpha, slow), self.alpha)

    def length_scale(self) -> float:
        return self.g0 ** (1.0 / self.alpha)


@dataclass(frozen=True)
class AlgebraicLog(PotentialModel):
    """U(r) = min(g0 r^-alpha |log(r/mu)|, core_cap) with alpha > 2."""

    g0: float = 1.0
    mu: float = 1.0
    alpha: float = 3.0
    core_cap: float | None = None

    def __post_init__(self):
        _require_positive(g0=self.g0, mu=self.mu, alpha=self.alpha)
        if self.alpha <= 2:
            raise ValueError(f"alpha must exceed 2, got {self.alpha!r}")
        if self.core_cap is None:
            object.__setattr__(self, "core_cap", 1e6 * self.g0)
        _require_positive(core_cap=self.core_cap)

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            raw = self.g0 * r ** (-self.alpha) * np.abs(np.log(r / self.mu))
        out = np.where(np.isfinite(raw), raw, self.core_cap)
        out = np.minimum(out, self.core_cap)
        return out if out.ndim else float(out)

    def decay_class(self) -> DecayClass:
        return DecayClass("sub_gaussian")

    def regular_decay(self) -> RegularDecayDescriptor:
        # F(t) = (g0 t)^(1/alpha) [(log t)/alpha]^(1/alpha)
        slow = IterLogProduct(
            (self.g0 / self.alpha) ** (1.0 / self.alpha), (1.0 / self.alpha,)
        )
        return RegularDecayDescriptor(RegVarFn(1.0 / self.alpha, slow), self.alpha)

    def monotone_tail_radius(self) -> float:
        # g0 r^-a log(r/mu) decreases once log(r/mu) > 1/alpha
        return self.mu * math.exp(1.0 / self.alpha)

    def length_scale(self) -> float:
        return max(self.mu, self.g0 ** (1.0 / self.alpha))


# ---------------------------------------------------------------------------
# operations

def evaluate_potential(model: PotentialModel, r):
    """U(r); accepts scalars or arrays of radii >= 0."""
    if np.any(np.asarray(r) < 0):
        raise ValueError("radius must be non-negative")
    return model.evaluate(r)


def classify_decay(model: PotentialModel) -> DecayClass:
    """Analytic decay class of the family."""
    return model.decay_class()


def regular_decay_of(model: PotentialModel) -> RegularDecayDescriptor | None:
    """The (F, alpha) descriptor, or None for compact/Gaussian families."""
    return model.regular_decay()


def check_regular_decay(
    model: PotentialModel,
    descriptor: RegularDecayDescriptor,
    radii: Iterable[float],
) -> float:
    """Max over the radii of |F(1/U(r))/r - 1|.

    A numeric consistency check that the symbolic descriptor matches the
    evaluator; a vanishing U at a probed radius counts as infinite deviation.
    """
    worst = 0.0
    for r in radii:
        if r <= 0:
            raise ValueError("probe radii must be positive")
        u = float(model.evaluate(r))
        if u == 0.0:
            return math.inf
        worst = max(worst, abs(descriptor.F(1.0 / u) / r - 1.0))
    return worst


def potential_integral(model: PotentialModel, moment: int = 0,
                       rtol: float = 1e-10) -> float:
    """2 pi * int_0^inf U(r)^(moment+1) r dr by quadrature.

    moment=0 gives the plane integral of U, moment=1 that of U^2.
    """
    from scipy.integrate import quad

    power = moment + 1
    scale = model.length_scale()

    def f(r):
        return float(model.evaluate(r)) ** power * r

    value, _ = quad(f, 0.0, 4.0 * scale, limit=400)
    # march outward in log-radius until the decaying tail closes
    s = math.log(4.0 * scale)
    while True:
        seg, _ = quad(lambda u: f(math.exp(u)) * math.exp(u), s, s + 3.0, limit=200)
        value += seg
        s += 3.0
        if seg <= rtol * value or s > 500:
            if seg > rtol * value:
                raise ValueError("potential integral did not converge")
            break
    return 2.0 * math.pi * value


# ---------------------------------------------------------------------------
# config-facing constructors

CATALOGUE_FAMILIES = {
    "compact_disk": CompactDisk,
    "gaussian": GaussianPotential,
    "log_corrected_gaussian": LogCorrectedGaussian,
    "stretched_gaussian": StretchedGaussian,
    "algebraic": Algebraic,
    "algebraic_log": AlgebraicLog,
}

_FIELD_NAMES = {
    "compact_disk": ("g", "R"),
    "gaussian": ("g", "lam"),
    "log_corrected_gaussian": ("g", "lam", "mu"),
    "stretched_gaussian": ("g", "lam", "beta"),
    "algebraic": ("g0", "alpha", "core_cap"),
    "algebraic_log": ("g0", "mu", "alpha", "core_cap"),
}


def model_from_dict(spec: dict) -> PotentialModel:
    """Build a potential from {"family": ..., <parameters>}."""
    try:
        family = spec["family"]
    except KeyError:
        raise ValueError("potential spec needs a 'family' key") from None
    try:
        cls = CATALOGUE_FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown potential family {family!r}") from None
    params = {k: v for k, v in spec.items() if k != "family"}
    allowed = set(_FIELD_NAMES[family])
    unknown = set(params) - allowed
    if unknown:
        raise ValueError(f"unknown parameters for {family}: {sorted(unknown)}")
    return cls(**params)


def model_to_dict(model: PotentialModel) -> dict:
    for name, cls in CATALOGUE_FAMILIES.items():
        if isinstance(model, cls):
            out = {"family": name}
            for f in _FIELD_NAMES[name]:
                out[f] = getattr(model, f)
            return out
    raise TypeError(f"unknown model type {type(model).__name__}")
