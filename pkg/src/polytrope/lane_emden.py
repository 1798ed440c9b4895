"""Lane-Emden integration for polytropic spheres.

The dimensionless enthalpy theta(xi) of a polytrope of index n obeys

    (xi^2 theta')' + xi^2 theta^n = 0,   theta(0) = 1,  theta'(0) = 0.

The 2 theta'/xi term is a removable singularity at the origin, so the
integration starts from a sixth-order Taylor expansion at a small offset
and proceeds with an adaptive high-order Runge-Kutta scheme to the first
zero xi1 of theta (the dimensionless stellar surface), which exists for
n < 5.  For n = 5 the solution extends to infinity and the integration
stops at a caller-chosen cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

__all__ = [
    "PolytropicIndex",
    "EmdenSolution",
    "DerivedConstants",
    "N5Asymptotics",
    "as_index",
    "series_start",
    "integrate_emden",
    "derived_constants",
    "n5_asymptotics",
    "exact_theta",
]

#: default offset at which the series hands over to the ODE integrator
XI_START = 1e-3

#: surface-mass coefficient lim (-xi^2 theta') for n = 5, equal to sqrt(3)
N5_MASS_COEFF = math.sqrt(3.0)


@dataclass(frozen=True)
class PolytropicIndex:
    """Polytropic index n with its derived scaling exponent.

    Indices outside [0, 5] are rejected: for n > 5 the central density
    of a regular model diverges and the total mass is infinite.
    """

    n: float

    def __post_init__(self) -> None:
        n = float(self.n)
        if not math.isfinite(n):
            raise ValueError("polytropic index must be finite")
        if n < 0.0 or n > 5.0:
            raise ValueError(
                f"polytropic index n={n} out of range [0, 5]; beyond n=5 the "
                "central density diverges and the total mass is infinite"
            )
        object.__setattr__(self, "n", n)

    @property
    def has_finite_surface(self) -> bool:
        return self.n < 5.0

    @property
    def omega_defined(self) -> bool:
        """Whether the surface invariant omega_n exists (n != 1)."""
        return self.n != 1.0

    @property
    def omega_tilde(self) -> float:
        """Scaling exponent 2/(n-1) of the enthalpy under radial dilation."""
        if self.n == 1.0:
            raise ValueError("omega undefined for n=1")
        return 2.0 / (self.n - 1.0)


def as_index(n: float | PolytropicIndex) -> PolytropicIndex:
    if isinstance(n, PolytropicIndex):
        return n
    return PolytropicIndex(float(n))


def series_start(n: float | PolytropicIndex, xi0: float) -> tuple[float, float]:
    """Taylor values (theta, theta') at a small radius xi0.

    Uses the regular-center expansion through O(xi^6),

        theta = 1 - xi^2/6 + n xi^4/120 - n(8n-5) xi^6/15120,

    whose truncation error is bounded by the first omitted term.
    Valid for 0 < xi0 <= 0.1.
    """
    idx = as_index(n)
    if not 0.0 < xi0 <= 0.1:
        raise ValueError(f"series start requires 0 < xi0 <= 0.1, got {xi0}")
    nn = idx.n
    c6 = nn * (8.0 * nn - 5.0) / 15120.0
    theta = 1.0 - xi0**2 / 6.0 + nn * xi0**4 / 120.0 - c6 * xi0**6
    dtheta = -xi0 / 3.0 + nn * xi0**3 / 30.0 - 6.0 * c6 * xi0**5
    return theta, dtheta


def exact_theta(n: float, xi):
    """Closed-form Emden function for n in {0, 1, 5}."""
    x = np.asarray(xi, dtype=float)
    if n == 0:
        return 1.0 - x**2 / 6.0
    if n == 1:
        return np.sinc(x / np.pi)
    if n == 5:
        return 1.0 / np.sqrt(1.0 + x**2 / 3.0)
    raise ValueError(f"no closed form for n={n}")


@dataclass(frozen=True)
class EmdenSolution:
    """Dense numerical solution theta_n(xi) with its first zero.

    Immutable after construction; the evaluator may be shared freely
    between threads or worker processes.
    """

    index: PolytropicIndex
    xi: np.ndarray
    theta: np.ndarray
    dtheta: np.ndarray
    #: first zero of theta; None when n = 5 (no finite surface)
    xi1: float | None
    #: last radius covered by the dense output (xi1, or the n=5 cutoff)
    xi_end: float
    tol: float
    _dense: object = field(repr=False)
    _xi_start: float = field(repr=False, default=XI_START)

    def evaluate(self, xi) -> tuple[np.ndarray, np.ndarray]:
        """(theta, theta') at arbitrary xi in [0, xi_end], vectorized."""
        x = np.atleast_1d(np.asarray(xi, dtype=float))
        if np.any(x < 0.0) or np.any(x > self.xi_end * (1.0 + 1e-12)):
            raise ValueError(f"evaluation outside [0, {self.xi_end}]")
        th = np.empty_like(x)
        dth = np.empty_like(x)
        inner = x < self._xi_start
        if np.any(inner):
            nn = self.index.n
            xs = x[inner]
            c6 = nn * (8.0 * nn - 5.0) / 15120.0
            th[inner] = 1.0 - xs**2 / 6.0 + nn * xs**4 / 120.0 - c6 * xs**6
            dth[inner] = -xs / 3.0 + nn * xs**3 / 30.0 - 6.0 * c6 * xs**5
        if np.any(~inner):
            vals = self._dense(np.clip(x[~inner], None, self.xi_end))
            th[~inner] = vals[0]
            dth[~inner] = vals[1]
        if np.isscalar(xi) or np.ndim(xi) == 0:
            return float(th[0]), float(dth[0])
        return th, dth

    def theta_at(self, xi):
        return self.evaluate(xi)[0]

    def dtheta_at(self, xi):
        return self.evaluate(xi)[1]

    def uniform_grid(self, num: int = 201) -> np.ndarray:
        """Uniform resampling grid on [0, xi1] (or [0, xi_end] for n=5)."""
        return np.linspace(0.0, self.xi_end, num)

    @property
    def surface_slope(self) -> float:
        """(-xi^2 theta') at the surface; the n=5 limit is sqrt(3)."""
        if self.xi1 is None:
            return N5_MASS_COEFF
        return -self.xi1**2 * self.dtheta_at(self.xi1)


def integrate_emden(
    n: float | PolytropicIndex,
    tol: float = 1e-12,
    xi_max: float = 100.0,
    cutoff: float = 2000.0,
    xi_start: float = XI_START,
) -> EmdenSolution:
    """Integrate the Lane-Emden equation from the center outward.

    Parameters
    ----------
    n : polytropic index in [0, 5]
    tol : relative tolerance of the adaptive stepper, in [1e-14, 1e-6];
        the surface zero is then refined on the dense output so that
        |theta(xi1)| < tol
    xi_max : integration span for n = 5, which has no surface
    cutoff : hard radius limit for n < 5; if no zero is found before it,
        the index is too close to 5 for the given cutoff
    """
    idx = as_index(n)
    if not 1e-14 <= tol <= 1e-6:
        raise ValueError(f"tol={tol} outside [1e-14, 1e-6]")
    nn = idx.n
    theta0, dtheta0 = series_start(idx, xi_start)

    def rhs(x, y):
        th, dth = y
        thn = th**nn if th > 0.0 else 0.0
        return (dth, -2.0 * dth / x - thn)

    rtol = max(tol, 2.5e-14)
    atol = max(tol * 1e-3, 1e-16)

    if not idx.has_finite_surface:
        if not xi_max > 0.0:
            raise ValueError("xi_max must be positive for n=5")
        sol = solve_ivp(rhs, (xi_start, xi_max), (theta0, dtheta0),
                        method="DOP853", rtol=rtol, atol=atol,
                        dense_output=True)
        if not sol.success:
            raise RuntimeError(f"step control failed for n=5: {sol.message}")
        return EmdenSolution(index=idx, xi=sol.t, theta=sol.y[0],
                             dtheta=sol.y[1], xi1=None, xi_end=xi_max,
                             tol=tol, _dense=sol.sol, _xi_start=xi_start)

    surface = lambda x, y: y[0]
    surface.terminal = True
    surface.direction = -1
    sol = solve_ivp(rhs, (xi_start, cutoff), (theta0, dtheta0),
                    method="DOP853", rtol=rtol, atol=atol,
                    dense_output=True, events=surface)
    if not sol.success and sol.status != 1:
        raise RuntimeError(f"step control failed for n={nn}: {sol.message}")
    if sol.status != 1 or len(sol.t_events[0]) == 0:
        raise RuntimeError(
            f"no surface zero found before xi={cutoff} for n={nn}; "
            "raise the cutoff (the surface radius diverges as n -> 5)"
        )
    xi_event = float(sol.t_events[0][0])

    # Bisection-safeguarded refinement on the dense output.  The bracket
    # must stay inside integrated steps: extrapolation beyond them is
    # meaningless.
    f = lambda x: float(sol.sol(x)[0])
    if f(xi_event) >= 0.0:
        xi1 = xi_event
    else:
        nodes = sol.t[sol.t < xi_event]
        k = len(nodes) - 1
        while k >= 0 and f(nodes[k]) <= 0.0:
            k -= 1
        lo = nodes[k] if k >= 0 else xi_start
        xi1 = float(brentq(f, lo, xi_event, xtol=1e-13))

    xi_nodes = np.append(sol.t[sol.t < xi1], xi1)
    th, dth = sol.sol(xi_nodes)
    return EmdenSolution(index=idx, xi=xi_nodes, theta=th, dtheta=dth,
                         xi1=xi1, xi_end=xi1, tol=tol, _dense=sol.sol,
                         _xi_start=xi_start)


@dataclass(frozen=True)
class DerivedConstants:
    """Per-index surface and core summary of an Emden solution.

    The core radius xi_core is defined by u(xi_core) = 2, where
    u = dlog m/dlog r; this is exactly the radius of maximum specific
    gravity (theta'' = 0).  For n = 0 the entire star is core and the
    n = 5 row holds the limiting values (infinite radius, finite mass).
    """

    n: float
    xi1: float
    surface_slope: float
    omega0: float
    rho_ratio: float
    xi_core: float
    r_core_frac: float
    m_core_frac: float


def _u_of(sol: EmdenSolution, x: float) -> float:
    th, dth = sol.evaluate(x)
    return -x * th**sol.index.n / dth


def derived_constants(sol: EmdenSolution) -> DerivedConstants:
    """Surface constants and core fractions of an integrated solution."""
    nn = sol.index.n
    if nn == 0.0:
        xi1 = sol.xi1
        return DerivedConstants(n=nn, xi1=xi1, surface_slope=sol.surface_slope,
                                omega0=1.0 / 3.0, rho_ratio=1.0, xi_core=xi1,
                                r_core_frac=1.0, m_core_frac=1.0)
    xi_core = brentq(lambda x: _u_of(sol, x) - 2.0, 1e-3,
                     sol.xi_end * (1.0 - 1e-9), xtol=1e-12)
    m_core = -xi_core**2 * sol.dtheta_at(xi_core)
    if not sol.index.has_finite_surface:
        return DerivedConstants(n=nn, xi1=math.inf, surface_slope=N5_MASS_COEFF,
                                omega0=0.0, rho_ratio=math.inf, xi_core=xi_core,
                                r_core_frac=0.0,
                                m_core_frac=m_core / N5_MASS_COEFF)
    xi1 = sol.xi1
    dth1 = sol.dtheta_at(xi1)
    slope = -xi1**2 * dth1
    omega0 = slope / xi1 ** ((nn - 3.0) / (nn - 1.0)) if nn != 1.0 else math.nan
    return DerivedConstants(n=nn, xi1=xi1, surface_slope=slope, omega0=omega0,
                            rho_ratio=-xi1 / (3.0 * dth1), xi_core=xi_core,
                            r_core_frac=xi_core / xi1,
                            m_core_frac=m_core / slope)


@dataclass(frozen=True)
class N5Asymptotics:
    xi1: float
    xi_core: float
    r_core_frac: float
    omega0: float


def n5_asymptotics(n: float) -> N5Asymptotics:
    """Leading-order estimates of the surface and core scales as n -> 5.

    Only the surface radius estimate xi1 ~ 3(n+1)/(5-n) is sharp away
    from the limit (a few percent at n = 4.5); the core-scale estimates
    are rough and should be read as order-of-magnitude trends.
    """
    if not 4.5 <= n < 5.0:
        raise ValueError(f"asymptotic forms valid for 4.5 <= n < 5, got {n}")
    xi1 = 3.0 * (n + 1.0) / (5.0 - n)
    return N5Asymptotics(xi1=xi1,
                         xi_core=math.sqrt(10.0 / (3.0 * n)),
                         r_core_frac=0.045 * (5.0 - n),
                         omega0=math.sqrt(3.0 / xi1))
