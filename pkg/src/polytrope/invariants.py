"""Homology-invariant formulation of polytropic structure.

The logarithmic derivatives

    u = dlog m/dlog r,   v = -dlog(P/rho)/dlog r,   w = n v = -dlog rho/dlog r

are invariant under the radial scaling symmetry of the hydrostatic
equations, which closes them into the autonomous pair

    du/dlog r = u (3 - u - w),      dw/dlog r = w (u - 1 + w/n),

or the single first-order equation dw/du = w(u-1+w/n) / [u(3-u-w)].
The regular (finite central density) solution leaves the critical point
(u, w) = (3, 0) tangent to w = (5/3)(3-u) and, for n < 5, runs to the
surface u -> 0 where w diverges like n [omega0^(n-1)/u]^(1/n) while
omega = (u v^n)^(1/(n-1)) tends to the finite surface constant omega0.

This module integrates that reduced problem on its own (never calling
the Lane-Emden integrator) and reconstructs the full profiles by
quadrature, so the two routes can be cross-validated against each other.
z = 3 - u is used as the integration variable; z = 0 is the center and
z = 3 the surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from .lane_emden import EmdenSolution, PolytropicIndex, as_index

__all__ = [
    "HomologyState",
    "InvariantCurve",
    "ProfileTable",
    "CorePoint",
    "invariants_at",
    "solve_uw_plane",
    "picard_w",
    "volterra_exponent",
    "series_matched_exponent",
    "quadrature_profiles",
    "core_locator",
]

#: z where the center series hands over to the dense phase-A output
_Z_LO = 1e-6
#: density-invariant magnitude at which integration switches to the
#: surface-regular variables (u^(1/n), u (w/n)^n)
_W_CAP = 50.0


def _w_series_coeff(n: float) -> float:
    """Quadratic coefficient of w(z) = (5/3) z + b z^2 + ... at the center."""
    return 5.0 * (5.0 - n) / (63.0 * n)


@dataclass(frozen=True)
class HomologyState:
    """Scale invariants at one radius; fields may be scalars or arrays."""

    u: float | np.ndarray
    v: float | np.ndarray
    w: float | np.ndarray
    z: float | np.ndarray
    omega: float | np.ndarray


def _omega_center_limit(n: float) -> float:
    if n == 0.0:
        return 1.0 / 3.0
    if n == 1.0:
        return math.nan
    if n < 1.0:
        return math.inf
    return 0.0


def invariants_at(sol: EmdenSolution, xi) -> HomologyState:
    """Invariants (u, v, w, z, omega) on an Emden solution.

    At xi = 0 the regularity limits (u, v, w, z) = (3, 0, 0, 0) are
    returned.  The surface xi1 itself is rejected since v diverges
    there; use the z-parameterization of the invariant curve instead.
    omega is NaN for n = 1, whose scaling exponent is unbounded.
    """
    nn = sol.index.n
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(x < 0.0):
        raise ValueError("negative radius")
    if sol.xi1 is not None and np.any(x >= sol.xi1 * (1.0 - 1e-13)):
        raise ValueError(
            "v diverges at the surface xi1; evaluate strictly inside or "
            "work with the z-parameterized invariant curve"
        )
    u = np.full_like(x, 3.0)
    v = np.zeros_like(x)
    omega = np.full_like(x, _omega_center_limit(nn))
    interior = x > 0.0
    if np.any(interior):
        xs = x[interior]
        th, dth = sol.evaluate(xs)
        th = np.atleast_1d(th)
        dth = np.atleast_1d(dth)
        u[interior] = -xs * th**nn / dth
        v[interior] = -xs * dth / th
        if nn != 1.0:
            omega[interior] = -(xs ** (1.0 + sol.index.omega_tilde)) * dth
        else:
            omega[interior] = np.nan
    w = nn * v
    z = 3.0 - u
    if np.isscalar(xi) or np.ndim(xi) == 0:
        return HomologyState(u=float(u[0]), v=float(v[0]), w=float(w[0]),
                             z=float(z[0]), omega=float(omega[0]))
    return HomologyState(u=u, v=v, w=w, z=z, omega=omega)


def volterra_exponent(n: float) -> float:
    """Exponent J_n = (9n-10)/(7-n) of the closed Picard form for w.

    Note: this form is not exact at n = 0 or n = 5 (see picard_w);
    series_matched_exponent gives the variant that is.
    """
    if n == 7.0:
        raise ValueError("exponent pole at n=7")
    return (9.0 * n - 10.0) / (7.0 - n)


def series_matched_exponent(n: float) -> float:
    """Exponent (9n-10)/(7n) matching the regular solution through z^2.

    With this exponent the closed Picard form reproduces the exact
    center curvature w''(0) = 2*5(5-n)/(63n) and reduces identically to
    w = (5/3) z at n = 5.
    """
    if n == 0.0:
        raise ValueError("exponent undefined at n=0 (w vanishes identically)")
    return (9.0 * n - 10.0) / (7.0 * n)


def picard_w(n: float | PolytropicIndex, z, exponent: float | None = None):
    """One-step Picard closure of the Volterra form of the w equation.

    Evaluates w(z) ~ (5/J) [1 - (1 - z/3)^J] with J = volterra_exponent(n)
    unless an explicit exponent is supplied.  The tangency dw/dz -> 5/3
    at the center holds for every J.
    """
    idx = as_index(n)
    J = volterra_exponent(idx.n) if exponent is None else float(exponent)
    zz = np.asarray(z, dtype=float)
    if np.any(zz < 0.0) or np.any(zz > 3.0):
        raise ValueError("z outside [0, 3]")
    with np.errstate(divide="ignore", over="ignore"):
        if abs(J) < 1e-8:
            out = -5.0 * np.log1p(-zz / 3.0)
        else:
            out = -(5.0 / J) * np.expm1(J * np.log1p(-zz / 3.0))
    if np.ndim(z) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class InvariantCurve:
    """Regular solution of the invariant-plane equation for one index.

    `u` and `w` sample the curve from the center (u just below 3) down
    to `u_stop`.  When the curve was integrated all the way to the
    surface, `omega0` carries the surface constant estimated by the
    u -> 0 extrapolation of omega = (u v^n)^(1/(n-1)) and `omega0_limit`
    the value read off at u = 0 exactly in surface-regular variables
    (NaN for n = 1, where omega is undefined).
    """

    index: PolytropicIndex
    u: np.ndarray
    w: np.ndarray
    omega0: float
    omega0_limit: float
    u_stop: float
    _dense_a: object = field(repr=False, default=None)
    _z_span: tuple[float, float] = field(repr=False, default=(0.0, 0.0))
    _dense_b: object = field(repr=False, default=None)
    _t_mid: float = field(repr=False, default=0.0)

    @property
    def covers_surface(self) -> bool:
        return self._dense_b is not None or self.index.n == 5.0

    def w_at(self, z):
        """Density invariant w on the regular curve, parameterized by z."""
        nn = self.index.n
        if nn == 0.0:
            raise ValueError("degenerate curve for n=0: u = 3 identically")
        if np.ndim(z) == 0:
            zv = float(z)
            z_lo, z_hi = self._z_span
            if z_lo <= zv <= z_hi and self._dense_a is not None:
                return float(self._dense_a(zv)[0])
        zz = np.atleast_1d(np.asarray(z, dtype=float))
        if np.any(zz < 0.0) or np.any(zz > 3.0):
            raise ValueError("z outside [0, 3]")
        out = np.empty_like(zz)
        z_lo, z_hi = self._z_span
        m_series = zz < z_lo
        m_tail = zz > z_hi
        m_mid = ~(m_series | m_tail)
        if np.any(m_series):
            b = _w_series_coeff(nn) if nn != 5.0 else 0.0
            out[m_series] = (5.0 / 3.0) * zz[m_series] + b * zz[m_series] ** 2
        if np.any(m_mid):
            if nn == 5.0 and self._dense_a is None:
                out[m_mid] = (5.0 / 3.0) * zz[m_mid]
            else:
                out[m_mid] = self._dense_a(zz[m_mid])[0]
        if np.any(m_tail):
            if nn == 5.0:
                out[m_tail] = (5.0 / 3.0) * zz[m_tail]
            elif self._dense_b is None:
                raise ValueError(
                    f"curve covers z <= {z_hi:.6g} only; rebuild with a "
                    "smaller u_stop to reach the surface"
                )
            else:
                t = (3.0 - zz[m_tail]) ** (1.0 / nn)
                W = np.clip(self._dense_b(t)[0], 1e-300, None)
                with np.errstate(divide="ignore"):
                    out[m_tail] = nn * W ** (1.0 / nn) / t
        if np.ndim(z) == 0:
            return float(out[0])
        return out

    def surface_w_coefficient(self, u) -> np.ndarray:
        """omega = (u v^n)^(1/(n-1)) along the curve, as a function of u."""
        nn = self.index.n
        if nn == 1.0:
            raise ValueError("omega undefined for n=1")
        uu = np.atleast_1d(np.asarray(u, dtype=float))
        W = self._big_w_at(uu)
        out = W ** (1.0 / (nn - 1.0))
        if np.ndim(u) == 0:
            return float(out[0])
        return out

    def _big_w_at(self, uu: np.ndarray) -> np.ndarray:
        """W = u (w/n)^n = omega^(n-1) as a function of u."""
        nn = self.index.n
        t_switch = self._t_mid
        out = np.empty_like(uu)
        if nn == 5.0:
            w = self.w_at(3.0 - uu)
            return uu * (w / nn) ** nn
        tt = uu ** (1.0 / nn)
        m_b = tt <= t_switch if self._dense_b is not None else np.zeros_like(uu, bool)
        if np.any(m_b):
            out[m_b] = self._dense_b(tt[m_b])[0]
        if np.any(~m_b):
            w = self.w_at(3.0 - uu[~m_b])
            out[~m_b] = uu[~m_b] * (w / nn) ** nn
        return out

    def omega0_by_extrapolation(self, u_lo: float = 1e-4, u_hi: float = 1e-2,
                                degree: int = 4, num: int = 40) -> float:
        """Extrapolate omega(u) to u = 0 in powers of u^(1/n).

        The direct limit is out of reach in the (u, w) variables because
        w diverges at the surface, but omega has a one-sided expansion
        omega0 + c1 u^(1/n) + c2 u^(2/n) + ..., so a polynomial fit in
        s = u^(1/n) over [u_lo, u_hi] extrapolates cleanly to s = 0.
        """
        nn = self.index.n
        if nn == 1.0:
            raise ValueError("omega undefined for n=1")
        if not self.covers_surface:
            raise ValueError("curve was not integrated to the surface")
        uu = np.geomspace(u_lo, u_hi, num)
        om = self.surface_w_coefficient(uu)
        s = uu ** (1.0 / nn)
        fit = np.polynomial.Polynomial.fit(s, om, degree)
        return float(fit(0.0))


def _integrate_phase_a(nn: float, z_hi: float, tol: float):
    """Regular-solution integration of dw/dz from the center tangent."""
    z0 = _Z_LO
    w0 = (5.0 / 3.0) * z0 + (_w_series_coeff(nn) if nn != 5.0 else 0.0) * z0**2

    def rhs(zv, y):
        w = y[0]
        return (w * (2.0 - zv + w / nn) / ((3.0 - zv) * (w - zv)),)

    cap = lambda zv, y: y[0] - _W_CAP
    cap.terminal = True
    cap.direction = 1
    sol = solve_ivp(rhs, (z0, z_hi), (w0,), method="DOP853", rtol=tol,
                    atol=1e-14, dense_output=True, events=cap)
    if not sol.success and sol.status != 1:
        raise RuntimeError(
            f"invariant-plane integration stalled at u={3.0 - sol.t[-1]:.3e} "
            f"for n={nn}: {sol.message}"
        )
    return sol


def _integrate_phase_b(nn: float, t_mid: float, W_mid: float, tol: float):
    """Surface-regular integration of W(t), t = u^(1/n), W = u (w/n)^n.

    dW/dt = n W (3 - n + (n-1) t^n) / (t (3 - t^n) - n W^(1/n)) is
    regular through t = 0, where W(0) = omega0^(n-1).
    """

    def rhs(t, y):
        W = max(y[0], 1e-300)
        den = t * (3.0 - t**nn) - nn * W ** (1.0 / nn)
        return (nn * W * (3.0 - nn + (nn - 1.0) * t**nn) / den,)

    sol = solve_ivp(rhs, (t_mid, 0.0), (W_mid,), method="DOP853", rtol=tol,
                    atol=1e-16, dense_output=True)
    if not sol.success:
        raise RuntimeError(
            f"surface-variable integration stalled at u={sol.t[-1]**nn:.3e} "
            f"for n={nn}: {sol.message}"
        )
    return sol


def solve_uw_plane(n: float | PolytropicIndex, u_stop: float = 1e-6,
                   tol: float = 1e-11) -> InvariantCurve:
    """Integrate the regular invariant-plane solution from u = 3 down.

    Starts at u = 3 - 1e-6 on the center tangent w = (5/3)(3 - u) with
    its quadratic series correction.  Toward the surface the (u, w)
    variables degenerate (w blows up), so once w passes a cap the
    integration continues in the surface-regular pair (u^(1/n), u(w/n)^n),
    which reaches u = 0 exactly whenever u_stop <= 1e-2.  The surface
    constant omega0 is then reported from the u -> 0 extrapolation of
    (u v^n)^(1/(n-1)) and, independently, from its value at u = 0.

    For n = 0 the curve degenerates to the point (u, w) = (3, 0) with
    omega = 1/3 everywhere; for n = 5 the exact line w = (5/3)(3 - u)
    continues the numerical curve beyond the phase-A span.
    """
    idx = as_index(n)
    nn = idx.n
    if not 0.0 < u_stop < 3.0:
        raise ValueError(f"u_stop={u_stop} outside (0, 3)")
    if nn == 0.0:
        return InvariantCurve(index=idx, u=np.array([3.0]), w=np.array([0.0]),
                              omega0=1.0 / 3.0, omega0_limit=1.0 / 3.0,
                              u_stop=u_stop)

    want_surface = u_stop <= 1e-2
    z_hi_target = 3.0 - (1e-6 if want_surface else u_stop)
    if nn == 5.0:
        z_hi_target = min(z_hi_target, 3.0 - 1e-2)
    sol_a = _integrate_phase_a(nn, z_hi_target, tol)
    z_mid = float(sol_a.t[-1])

    dense_b = None
    t_mid = 0.0
    omega0 = math.nan
    omega0_limit = math.nan
    u_nodes_b = np.empty(0)
    w_nodes_b = np.empty(0)

    if nn == 5.0:
        omega0 = 0.0
        omega0_limit = 0.0
    elif want_surface or sol_a.status == 1:
        u_mid = 3.0 - z_mid
        w_mid = float(sol_a.y[0][-1])
        t_mid = u_mid ** (1.0 / nn)
        W_mid = u_mid * (w_mid / nn) ** nn
        t_stop = 0.0 if want_surface else u_stop ** (1.0 / nn)
        sol_b = _integrate_phase_b(nn, t_mid, W_mid, tol)
        dense_b = sol_b.sol
        tb = sol_b.t[(sol_b.t > t_stop) & (sol_b.t < t_mid)]
        u_nodes_b = tb**nn
        w_nodes_b = nn * sol_b.sol(tb)[0] ** (1.0 / nn) / tb
        if want_surface and nn != 1.0:
            W0 = float(sol_b.y[0][-1])
            omega0_limit = W0 ** (1.0 / (nn - 1.0))

    mask_a = sol_a.t <= 3.0 - u_stop
    u_a = 3.0 - sol_a.t[mask_a]
    w_a = sol_a.y[0][mask_a]
    u_all = np.concatenate([u_a, u_nodes_b])
    w_all = np.concatenate([w_a, w_nodes_b])
    order = np.argsort(u_all)[::-1]

    curve = InvariantCurve(index=idx, u=u_all[order], w=w_all[order],
                           omega0=omega0, omega0_limit=omega0_limit,
                           u_stop=u_stop, _dense_a=sol_a.sol,
                           _z_span=(_Z_LO, z_mid), _dense_b=dense_b,
                           _t_mid=t_mid)
    if want_surface and nn not in (1.0, 5.0):
        omega0 = curve.omega0_by_extrapolation()
        curve = InvariantCurve(index=idx, u=curve.u, w=curve.w,
                               omega0=omega0, omega0_limit=omega0_limit,
                               u_stop=u_stop, _dense_a=sol_a.sol,
                               _z_span=(_Z_LO, z_mid), _dense_b=dense_b,
                               _t_mid=t_mid)
    return curve


@dataclass(frozen=True)
class ProfileTable:
    """Structure profiles reconstructed by quadrature from w(z)."""

    index: PolytropicIndex
    z: np.ndarray
    rho_frac: np.ndarray
    theta: np.ndarray
    m_frac: np.ndarray
    r_frac: np.ndarray
    quad_err: np.ndarray


def _quad(f, a, b) -> tuple[float, float]:
    val, err = quad(f, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val, err


def quadrature_profiles(curve: InvariantCurve, z_grid) -> ProfileTable:
    """Reconstruct (rho/rho_c, theta, m/M, r/R) from the invariant curve.

    Evaluates the exact quadratures

        log(rho/rho_c) = -int_0^z  w dz' / [(w - z')(3 - z')]
        log(m/M)  = (3/2) log(z/3) + int_3^z [1/(w - z') - 3/(2 z')] dz'
        log(r/R)  = (1/2) log(z/3) + int_3^z [1/((3-z')(w-z')) - 1/(2 z')] dz'

    with the singular endpoint prefactors split off analytically, so the
    braced integrands stay finite at both ends.  The surface-anchored
    integrals run through the region where w diverges; there the
    integration variable switches to t = (3 - z)^(1/n), in which every
    integrand is regular.  For n = 5 the closed forms are returned
    (r/R is NaN: the radius is infinite).
    """
    idx = curve.index
    nn = idx.n
    if nn == 0.0:
        raise ValueError("z-parameterization degenerates for n=0 (z = 0 "
                         "identically); use the closed uniform-density forms")
    z_in = np.atleast_1d(np.asarray(z_grid, dtype=float))
    if np.any(z_in < 0.0) or np.any(z_in >= 3.0):
        raise ValueError("z_grid must lie in [0, 3)")

    if nn == 5.0:
        rho = (1.0 - z_in / 3.0) ** 2.5
        return ProfileTable(index=idx, z=z_in, rho_frac=rho,
                            theta=np.sqrt(1.0 - z_in / 3.0),
                            m_frac=(z_in / 3.0) ** 1.5,
                            r_frac=np.full_like(z_in, np.nan),
                            quad_err=np.zeros_like(z_in))

    if not curve.covers_surface:
        raise ValueError("curve does not reach the surface; rebuild it with "
                         "u_stop <= 1e-2")

    z_mid = curve._z_span[1]
    t_mid = curve._t_mid
    dense_b = curve._dense_b
    b = _w_series_coeff(nn)

    def w_of(zv: float) -> float:
        return float(curve.w_at(zv))

    def f_rho(zv: float) -> float:
        if zv < 1e-9:
            return 5.0 / 6.0
        w = w_of(zv)
        return w / ((w - zv) * (3.0 - zv))

    def f_m(zv: float) -> float:
        if zv < 1e-9:
            return -2.25 * b
        return 1.0 / (w_of(zv) - zv) - 1.5 / zv

    def f_r(zv: float) -> float:
        if zv < 1e-9:
            return 1.0 / 6.0 - 0.75 * b
        return 1.0 / ((3.0 - zv) * (w_of(zv) - zv)) - 0.5 / zv

    def _wq(t: float) -> tuple[float, float]:
        """(n W^(1/n), z') at parameter t."""
        W = max(float(dense_b(t)[0]), 1e-300)
        return nn * W ** (1.0 / nn), 3.0 - t**nn

    def g_m(t: float) -> float:
        nw, zv = _wq(t)
        return nn * t**nn / (nw - t * zv) - 1.5 * nn * t ** (nn - 1.0) / zv

    def g_r(t: float) -> float:
        nw, zv = _wq(t)
        return nn / (nw - t * zv) - 0.5 * nn * t ** (nn - 1.0) / zv

    def h_rho(t: float) -> float:
        nw, zv = _wq(t)
        return nn * zv / (nw - t * zv)

    order = np.argsort(z_in)
    zs = z_in[order]
    A = np.empty_like(zs)      # -log rho
    I = np.empty_like(zs)      # m-integral from the surface
    J = np.empty_like(zs)      # r-integral from the surface
    errs = np.zeros_like(zs)

    in_a = zs <= z_mid
    # center-anchored rho integral, accumulated over segments
    acc, prev, err_acc = 0.0, 0.0, 0.0
    for k in np.nonzero(in_a)[0]:
        val, e = _quad(f_rho, prev, zs[k])
        acc += val
        err_acc += e
        prev = zs[k]
        A[k] = acc
        errs[k] += err_acc
    A_mid = None
    if np.any(~in_a):
        val, e_mid = _quad(f_rho, prev, z_mid)
        A_mid = acc + val
        for k in np.nonzero(~in_a)[0]:
            t_k = (3.0 - zs[k]) ** (1.0 / nn)
            val, e1 = _quad(h_rho, t_k, t_mid)
            A[k] = A_mid + nn * math.log(t_mid / t_k) + val
            errs[k] += e_mid + e1

    # surface-anchored integrals: tail first, then accumulate downward
    Tm, em = _quad(g_m, 0.0, t_mid)
    Tr, er = _quad(g_r, 0.0, t_mid)
    for k in np.nonzero(~in_a)[0]:
        t_k = (3.0 - zs[k]) ** (1.0 / nn)
        vm, e1 = _quad(g_m, 0.0, t_k)
        vr, e2 = _quad(g_r, 0.0, t_k)
        I[k] = -vm
        J[k] = -vr
        errs[k] += e1 + e2
    acc_m, acc_r, err_acc = -Tm, -Tr, em + er
    prev = z_mid
    for k in np.nonzero(in_a)[0][::-1]:
        vm, e1 = _quad(f_m, zs[k], prev)
        vr, e2 = _quad(f_r, zs[k], prev)
        acc_m -= vm
        acc_r -= vr
        err_acc += e1 + e2
        prev = zs[k]
        I[k] = acc_m
        J[k] = acc_r
        errs[k] += err_acc

    rho = np.exp(-A)
    with np.errstate(divide="ignore"):
        m_frac = np.where(zs > 0, (zs / 3.0) ** 1.5 * np.exp(I), 0.0)
        r_frac = np.where(zs > 0, np.sqrt(zs / 3.0) * np.exp(J), 0.0)

    inv = np.empty_like(order)
    inv[order] = np.arange(len(order))
    return ProfileTable(index=idx, z=z_in, rho_frac=rho[inv],
                        theta=rho[inv] ** (1.0 / nn),
                        m_frac=m_frac[inv], r_frac=r_frac[inv],
                        quad_err=errs[inv])


@dataclass(frozen=True)
class CorePoint:
    """Location where u = 2: the edge of the universal core."""

    xi_core: float
    z_core: float
    w_core: float
    rho_core_frac: float


def core_locator(obj: EmdenSolution | InvariantCurve) -> CorePoint:
    """Locate the u = 2 crossing on a solution or invariant curve.

    In z coordinates the core edge is exactly z = 1.  The mass density
    there stays near 0.4 rho_c for every index n >= 1.
    """
    if isinstance(obj, InvariantCurve):
        nn = obj.index.n
        if nn == 0.0:
            raise ValueError("u = 3 identically for n=0: the whole star is core")
        w_core = float(obj.w_at(1.0))
        prof = quadrature_profiles(obj, np.array([1.0]))
        return CorePoint(xi_core=math.nan, z_core=1.0, w_core=w_core,
                         rho_core_frac=float(prof.rho_frac[0]))
    sol = obj
    nn = sol.index.n
    if nn == 0.0:
        raise ValueError("u = 3 identically for n=0: the whole star is core")

    def u_minus_2(x: float) -> float:
        th, dth = sol.evaluate(x)
        return -x * th**nn / dth - 2.0

    hi = sol.xi_end * (1.0 - 1e-9)
    xi_core = brentq(u_minus_2, 1e-3, hi, xtol=1e-12)
    th, dth = sol.evaluate(xi_core)
    return CorePoint(xi_core=float(xi_core), z_core=1.0,
                     w_core=float(-nn * xi_core * dth / th),
                     rho_core_frac=float(th**nn))
