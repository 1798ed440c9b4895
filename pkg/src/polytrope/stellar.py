"""Dimensional stellar models and thermodynamic applications.

A polytrope P = K rho^(1+1/n) together with a central density rho_c
fixes the length scale alpha^2 = (n+1) K rho_c^(1/n-1) / (4 pi G), and
every dimensional profile follows from the Emden function:

    R = alpha xi1,      M = 4 pi rho_c alpha^3 (-xi^2 theta')|_surface,
    rho = rho_c theta^n,   m = 4 pi rho_c alpha^3 (-xi^2 theta'),
    H = H_c theta,         g = G m / r^2 = 4 pi G rho_c alpha (-theta').

Eliminating rho_c yields the mass-radius law

    M^(1-n) = 4 pi [G/((n+1) K)]^n omega0^(1-n) R^(3-n),

so R grows with M below n = 1, is independent of M at n = 1, shrinks
with M for 1 < n < 3, and the n = 3 mass is fixed by K alone:
M = 4 pi omega0_3 (K / pi G)^(3/2).

The n = 3 applications differ only in where K comes from: relativistic
electron degeneracy fixes K from fundamental constants (Chandrasekhar
mass), while an ideal-gas/radiation mixture at constant gas-pressure
fraction beta fixes K(M) through the quartic (1-beta)/beta^4 =
(M mu^2 / M_star)^2 (the Eddington standard model).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np
from scipy.optimize import bisect

from .lane_emden import (
    DerivedConstants,
    EmdenSolution,
    as_index,
    derived_constants,
    integrate_emden,
)

__all__ = [
    "PhysicalConstants",
    "StellarModel",
    "ChandrasekharResult",
    "EddingtonModel",
    "LuminosityResult",
    "EntropyStructure",
    "build_model",
    "chandrasekhar_mass",
    "eddington_m_star",
    "eddington_beta",
    "luminosity",
    "entropy_structure",
    "omega0_n3",
]

#: adiabatic temperature gradient of an ideal monatomic gas
NABLA_AD = 0.4


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants in one coherent unit system (default SI).

    R_gas is the gas constant per unit mass, k_B/m_H; a is the radiation
    constant 4 sigma/c.  Any value can be overridden from a key=value
    config file, so a self-consistent CGS (or scaled) system works too.
    """

    G: float = 6.67430e-11
    h: float = 6.62607015e-34
    c: float = 2.99792458e8
    m_H: float = 1.66053906660e-27
    a: float = 7.565733e-16
    R_gas: float = 8314.462618
    M_sun: float = 1.98847e30

    def __post_init__(self) -> None:
        for f in fields(self):
            if not getattr(self, f.name) > 0.0:
                raise ValueError(f"constant {f.name} must be positive")

    @classmethod
    def cgs(cls) -> "PhysicalConstants":
        return cls(G=6.67430e-8, h=6.62607015e-27, c=2.99792458e10,
                   m_H=1.66053906660e-24, a=7.565733e-15,
                   R_gas=8.314462618e7, M_sun=1.98847e33)

    @classmethod
    def from_file(cls, path) -> "PhysicalConstants":
        """Read `key = value` lines; unknown keys are rejected."""
        known = {f.name for f in fields(cls)}
        overrides: dict[str, float] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key = value")
                key, _, val = line.partition("=")
                key = key.strip()
                if key not in known:
                    raise ValueError(f"{path}:{lineno}: unknown constant {key!r}")
                overrides[key] = float(val.strip())
        return cls(**overrides)

    def replace(self, **kwargs) -> "PhysicalConstants":
        return replace(self, **kwargs)


DEFAULT_CONSTANTS = PhysicalConstants()


def omega0_n3(constants_tol: float = 1e-12) -> float:
    """Surface constant omega0 of the n = 3 Emden function, computed
    at runtime rather than hard-coded."""
    return derived_constants(integrate_emden(3.0, tol=constants_tol)).omega0


@dataclass(frozen=True)
class StellarModel:
    """Dimensional polytropic star; immutable once built."""

    index_n: float
    K: float
    rho_c: float
    constants: PhysicalConstants
    alpha: float
    H_c: float
    P_c: float
    M: float
    R: float
    solution: EmdenSolution = field(repr=False)
    derived: DerivedConstants = field(repr=False)

    def profiles(self, num: int = 201) -> dict[str, np.ndarray]:
        """Dimensional radial profiles on a uniform xi grid."""
        nn = self.index_n
        cst = self.constants
        xi = self.solution.uniform_grid(num)
        th, dth = self.solution.evaluate(xi)
        th = np.clip(np.atleast_1d(th), 0.0, None)
        dth = np.atleast_1d(dth)
        rho = self.rho_c * th**nn
        r = self.alpha * xi
        m = 4.0 * math.pi * self.rho_c * self.alpha**3 * (-(xi**2) * dth)
        g = 4.0 * math.pi * cst.G * self.rho_c * self.alpha * (-dth)
        H = self.H_c * th
        V = -cst.G * self.M / self.R - H
        return {"xi": xi, "r": r, "rho": rho, "P": self.K * rho ** (1.0 + 1.0 / nn),
                "m": m, "g": g, "H": H, "V": V}


def build_model(
    n: float,
    K: float,
    rho_c: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    tol: float = 1e-12,
    sol: EmdenSolution | None = None,
) -> StellarModel:
    """Scale an Emden solution to a dimensional star."""
    idx = as_index(n)
    if not idx.has_finite_surface:
        raise ValueError("n=5 polytropes have infinite radius; no finite "
                         "dimensional model exists")
    if K <= 0.0 or rho_c <= 0.0:
        raise ValueError("K and rho_c must be positive")
    if sol is None:
        sol = integrate_emden(idx, tol=tol)
    der = derived_constants(sol)
    nn = idx.n
    alpha = math.sqrt((nn + 1.0) * K * rho_c ** (1.0 / nn - 1.0)
                      / (4.0 * math.pi * constants.G))
    H_c = (nn + 1.0) * K * rho_c ** (1.0 / nn)
    M = 4.0 * math.pi * rho_c * alpha**3 * der.surface_slope
    return StellarModel(index_n=nn, K=K, rho_c=rho_c, constants=constants,
                        alpha=alpha, H_c=H_c, P_c=K * rho_c ** (1.0 + 1.0 / nn),
                        M=M, R=alpha * der.xi1, solution=sol, derived=der)


@dataclass(frozen=True)
class ChandrasekharResult:
    mu_e: float
    K_wd: float
    mass: float
    mass_closed_form: float
    m_star: float


def chandrasekhar_mass(
    mu_e: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    omega0_3: float | None = None,
) -> ChandrasekharResult:
    """Limiting mass of a relativistic degenerate white dwarf.

    K for ultrarelativistic electron degeneracy depends only on
    fundamental constants, K_wd = (hc/8)(3/pi)^(1/3) (m_H mu_e)^(-4/3),
    and the mass follows as M = 4 pi omega0_3 (K_wd / pi G)^(3/2).
    The closed form (pi^2 / (8 sqrt(15))) M_star / mu_e^2 is evaluated
    through the radiation/gas-constant route as an independent check of
    the constants' consistency.
    """
    if mu_e < 1.0:
        raise ValueError("mean molecular weight per electron must be >= 1")
    cst = constants
    if omega0_3 is None:
        omega0_3 = omega0_n3()
    K_wd = (cst.h * cst.c / 8.0) * (3.0 / math.pi) ** (1.0 / 3.0) \
        * (cst.m_H * mu_e) ** (-4.0 / 3.0)
    mass = 4.0 * math.pi * omega0_3 * (K_wd / (math.pi * cst.G)) ** 1.5
    m_star = eddington_m_star(cst, omega0_3)
    closed = (math.pi**2 / (8.0 * math.sqrt(15.0))) * m_star / mu_e**2
    return ChandrasekharResult(mu_e=mu_e, K_wd=K_wd, mass=mass,
                               mass_closed_form=closed, m_star=m_star)


def eddington_m_star(
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    omega0_3: float | None = None,
) -> float:
    """Mass constant M_star = 4 pi omega0_3 (pi G)^(-3/2) (3/a)^(1/2) R_gas^2.

    Equal to (3 sqrt(10) omega0_3 / pi^3) (hc / (G m_H^(4/3)))^(3/2)
    when a and R_gas take their statistical-mechanics values; about
    18.3 solar masses.
    """
    cst = constants
    if omega0_3 is None:
        omega0_3 = omega0_n3()
    return 4.0 * math.pi * omega0_3 * (math.pi * cst.G) ** (-1.5) \
        * math.sqrt(3.0 / cst.a) * cst.R_gas**2


@dataclass(frozen=True)
class EddingtonModel:
    """Constant-radiation-entropy n = 3 star of given mass."""

    M: float
    mu: float
    beta: float
    K_M: float
    m_star: float

    @property
    def L_frac(self) -> float:
        """L / L_Edd = 1 - beta."""
        return 1.0 - self.beta


def eddington_beta(
    M: float,
    mu: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    omega0_3: float | None = None,
) -> EddingtonModel:
    """Solve the quartic (1-beta)/beta^4 = (M mu^2/M_star)^2 for beta.

    The left side decreases monotonically from +inf at beta -> 0 to 0
    at beta = 1, so bisection on (0, 1] is guaranteed; beta = 1 only in
    the zero-mass limit.  K(M) then follows from the constant-entropy
    condition K = {[3(1-beta)/a] (R_gas/(mu beta))^4}^(1/3).

    For beta << 1 the quartic gives beta ~ (M mu^2/M_star)^(-1/2); the
    luminosity fraction 1 - beta then approaches 1 and L tracks M.
    """
    if M <= 0.0 or mu <= 0.0:
        raise ValueError("mass and mean molecular weight must be positive")
    cst = constants
    m_star = eddington_m_star(cst, omega0_3)
    x2 = (M * mu**2 / m_star) ** 2

    def f(beta: float) -> float:
        return (1.0 - beta) / beta**4 - x2

    beta = float(bisect(f, 1e-12, 1.0, xtol=1e-13))
    K_M = ((3.0 * (1.0 - beta) / cst.a) * (cst.R_gas / (mu * beta)) ** 4) ** (1.0 / 3.0)
    return EddingtonModel(M=M, mu=mu, beta=beta, K_M=K_M, m_star=m_star)


@dataclass(frozen=True)
class LuminosityResult:
    L_edd: float
    L: float
    #: informational empirical form L_edd * 0.003 mu^4 beta^4 (M/M_sun)^3
    L_calibrated: float


def luminosity(
    model: EddingtonModel,
    kappa_p: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> LuminosityResult:
    """Luminosity of an Eddington-model star given photospheric opacity.

    L = L_edd (1 - beta) with L_edd = 4 pi c G M / kappa_p is the
    normative relation; the 0.003 mu^4 beta^4 (M/M_sun)^3 calibration is
    emitted for reference only.
    """
    if kappa_p <= 0.0:
        raise ValueError("opacity must be positive")
    cst = constants
    L_edd = 4.0 * math.pi * cst.c * cst.G * model.M / kappa_p
    L_cal = L_edd * 0.003 * model.mu**4 * model.beta**4 \
        * (model.M / cst.M_sun) ** 3
    return LuminosityResult(L_edd=L_edd, L=L_edd * model.L_frac,
                            L_calibrated=L_cal)


@dataclass(frozen=True)
class EntropyStructure:
    prad_pgas: float
    s_rad: float
    s_gas: float
    ds_gas_dlogP: float
    nabla: float
    nabla_ad: float


def entropy_structure(
    n: float,
    T: float,
    rho: float,
    mu: float,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> EntropyStructure:
    """Thermal structure of an ideal-gas/radiation mixture in a polytrope.

    The thermal gradient bound in a polytrope of order n is
    nabla = 1/(n+1), so the gas entropy gradient
    dS_gas/dlogP = (R_gas/mu) [5/(2(n+1)) - 1] vanishes at n = 3/2
    (adiabatic stratification) and is negative for n > 3/2: with
    pressure decreasing outward, entropy then rises outward and the
    star is stable against convection.
    """
    if T <= 0.0 or rho <= 0.0 or mu <= 0.0:
        raise ValueError("T, rho and mu must be positive")
    nn = as_index(n).n
    cst = constants
    rg = cst.R_gas / mu
    prad_pgas = (T**3 / rho) * (cst.a * mu / (3.0 * cst.R_gas))
    s_rad = 4.0 * cst.a * T**3 / (3.0 * rho)
    s_gas = rg * math.log(T**2.5 / rho)
    nabla = 1.0 / (nn + 1.0)
    ds = rg * (5.0 / (2.0 * (nn + 1.0)) - 1.0)
    return EntropyStructure(prad_pgas=prad_pgas, s_rad=s_rad, s_gas=s_gas,
                            ds_gas_dlogP=ds, nabla=nabla, nabla_ad=NABLA_AD)
