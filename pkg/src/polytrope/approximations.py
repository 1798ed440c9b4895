"""Closed-form approximants to Emden functions.

Three families, all normalized to theta(0) = 1 with curvature -1/3:

* truncated Taylor series (general n through xi^6, n = 3 through xi^10),
* the Picard form (1 + xi^2/(6 N_n))^(-N_n) with N_n = 5/(3n-5), obtained
  from one fixed-point insertion of the universal core structure and
  exact for n in {0, 5},
* a rational [4/4] approximant for n = 3 that matches its Taylor series
  through xi^8 and vanishes at 6.921, within 0.4% of the true surface.

Coefficients are stored as exact rationals and evaluated in floating
point at call time.  Scalar evaluation sticks to plain arithmetic and
powers, so high-precision number types can be passed through for
coefficient-extraction work.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .lane_emden import EmdenSolution, as_index, integrate_emden

__all__ = [
    "ApproximantKind",
    "ErrorReport",
    "taylor_coefficients",
    "taylor_theta",
    "picard_exponent",
    "picard_theta",
    "pade3_theta",
    "pade3_first_zero",
    "approx_error_report",
]

#: Taylor coefficients of theta_3 in xi^2, exact rationals
TAYLOR_N3 = (
    Fraction(1),
    Fraction(-1, 6),
    Fraction(1, 40),
    Fraction(-19, 5040),
    Fraction(619, 1088640),
    Fraction(-2743, 39916800),
)

#: n=3 rational approximant, numerator and denominator in xi^2
PADE3_NUM = (Fraction(1), Fraction(-1, 108), Fraction(-11, 45360))
PADE3_DEN = (Fraction(1), Fraction(17, 108), Fraction(1, 1008))

#: below this distance from the N_n pole at n = 5/3 the limit form
#: exp(-xi^2/6) is used
PICARD_POLE_WIDTH = 1e-6


def taylor_coefficients(n: float, order: int) -> list[float]:
    """Series coefficients [c0, c2, ..., c_order] of theta_n in xi^2.

    General indices carry the expansion through xi^6,

        1 - xi^2/6 + n xi^4/120 - n(8n-5) xi^6/15120;

    n = 3 additionally through xi^10.
    """
    nn = as_index(n).n
    if order % 2 != 0 or order < 0:
        raise ValueError(f"order must be even and >= 0, got {order}")
    if order > 6 and nn != 3.0:
        raise ValueError(f"order {order} only available for n=3")
    if order > 10:
        raise ValueError("coefficients available through order 10 only")
    if nn == 3.0:
        return [float(c) for c in TAYLOR_N3[: order // 2 + 1]]
    full = [
        1.0,
        float(Fraction(-1, 6)),
        nn / 120.0,
        -nn * (8.0 * nn - 5.0) / 15120.0,
    ]
    return full[: order // 2 + 1]


def taylor_theta(n: float, order: int, xi):
    """Truncated central Taylor polynomial of theta_n at xi."""
    coeffs = taylor_coefficients(n, order)
    x2 = xi * xi
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x2 + c
    return acc


def picard_exponent(n: float) -> float:
    """N_n = 5/(3n-5); poles at n = 5/3, where exp(-xi^2/6) takes over."""
    if abs(3.0 * n - 5.0) < PICARD_POLE_WIDTH:
        raise ValueError("exponent pole at n=5/3; use the exponential limit")
    return 5.0 / (3.0 * n - 5.0)


def picard_theta(n: float, xi):
    """Picard closed form (1 + xi^2/(6 N_n))^(-N_n).

    Exact for n = 0 (1 - xi^2/6) and n = 5 ((1 + xi^2/3)^(-1/2)).  For
    n < 5/3 the base has a zero at xi^2 = 30/(5-3n); beyond it theta is
    continued as 0.  At n = 5/3 (pole of N_n) the limit exp(-xi^2/6) is
    returned.
    """
    nn = as_index(n).n
    if abs(3.0 * nn - 5.0) < PICARD_POLE_WIDTH:
        out = np.exp(-np.asarray(xi, dtype=float) ** 2 / 6.0)
        return float(out) if np.ndim(xi) == 0 else out
    N = picard_exponent(nn)
    base = 1.0 + xi * xi * ((3.0 * nn - 5.0) / 30.0)
    if isinstance(base, np.ndarray):
        with np.errstate(invalid="ignore"):
            return np.where(base > 0.0, np.abs(base) ** (-N), 0.0)
    if base <= 0.0:
        return 0.0 * base
    return base ** (-N)


def pade3_theta(xi):
    """Rational approximant to theta_3; nearly exact out to its zero.

    Matches the theta_3 series through xi^8 by construction; its
    expansion runs 1 - 0.166667 xi^2 + 0.025 xi^4 - 0.00376984 xi^6
    + 0.0005686 xi^8 - 0.0000857618 xi^10 + ...
    """
    x2 = xi * xi
    pn = [float(c) for c in PADE3_NUM]
    pd = [float(c) for c in PADE3_DEN]
    num = (pn[2] * x2 + pn[1]) * x2 + pn[0]
    den = (pd[2] * x2 + pd[1]) * x2 + pd[0]
    return num / den


def pade3_first_zero() -> float:
    """First zero of the rational approximant (near 6.921)."""
    return float(brentq(lambda x: pade3_theta(x), 6.0, 7.5, xtol=1e-12))


@dataclass(frozen=True)
class ApproximantKind:
    """One approximant choice: 'taylor' (with even order), 'picard', 'pade3'."""

    name: str
    order: int | None = None

    def __post_init__(self) -> None:
        if self.name not in ("taylor", "picard", "pade3"):
            raise ValueError(f"unknown approximant {self.name!r}")
        if self.name == "taylor":
            if self.order is None or self.order % 2 != 0 or self.order < 2:
                raise ValueError("taylor approximant needs an even order >= 2")
        elif self.order is not None:
            raise ValueError(f"{self.name} takes no order")

    def validate_for(self, n: float) -> None:
        if self.name == "pade3" and n != 3.0:
            raise ValueError("pade3 is defined for n=3 only")
        if self.name == "taylor" and self.order > 6 and n != 3.0:
            raise ValueError(f"taylor order {self.order} only available for n=3")

    @property
    def label(self) -> str:
        return f"taylor{self.order}" if self.name == "taylor" else self.name

    @classmethod
    def parse(cls, text: str, n: float | None = None) -> "ApproximantKind":
        t = text.strip().lower()
        if t in ("pade", "pade3"):
            return cls("pade3")
        if t == "picard":
            return cls("picard")
        if t == "taylor":
            return cls("taylor", order=10 if n == 3.0 else 6)
        if t.startswith("taylor"):
            return cls("taylor", order=int(t[len("taylor"):]))
        raise ValueError(f"unknown approximant {text!r}")

    def evaluate(self, n: float, xi):
        self.validate_for(n)
        if self.name == "taylor":
            return taylor_theta(n, self.order, xi)
        if self.name == "picard":
            return picard_theta(n, xi)
        return pade3_theta(xi)


def default_kinds(n: float) -> list[ApproximantKind]:
    kinds = [ApproximantKind("taylor", 10 if n == 3.0 else 6),
             ApproximantKind("picard")]
    if n == 3.0:
        kinds.append(ApproximantKind("pade3"))
    return kinds


@dataclass(frozen=True)
class ErrorReport:
    """Approximant values against the integrated solution on one grid.

    Errors are signed, relative where theta > 0.05 and absolute below
    (the relative error is meaningless at the surface zero).
    `picard_above` flags grid points where the Picard form overestimates
    theta; it rides above the true solution beyond its trust range since
    it satisfies the central but not the surface boundary condition.
    """

    n: float
    xi: np.ndarray
    theta_ref: np.ndarray
    values: dict[str, np.ndarray]
    errors: dict[str, np.ndarray]
    picard_above: np.ndarray | None


def _signed_error(approx: np.ndarray, ref: np.ndarray) -> np.ndarray:
    diff = approx - ref
    return np.where(ref > 0.05, diff / ref, diff)


def approx_error_report(
    n: float,
    kinds: list[ApproximantKind | str] | str = "all",
    xi_grid=None,
    sol: EmdenSolution | None = None,
    tol: float = 1e-10,
) -> ErrorReport:
    """Tabulate approximants and their signed errors versus theta_n."""
    nn = as_index(n).n
    if kinds == "all":
        kind_list = default_kinds(nn)
    else:
        kind_list = [k if isinstance(k, ApproximantKind)
                     else ApproximantKind.parse(k, nn) for k in kinds]
    for k in kind_list:
        k.validate_for(nn)
    if sol is None:
        sol = integrate_emden(nn, tol=tol)
    if xi_grid is None:
        xi_grid = sol.uniform_grid(201)
    xi_grid = np.asarray(xi_grid, dtype=float)
    theta_ref, _ = sol.evaluate(xi_grid)
    theta_ref = np.atleast_1d(theta_ref)

    values: dict[str, np.ndarray] = {}
    errors: dict[str, np.ndarray] = {}
    picard_above = None
    for k in kind_list:
        vals = np.asarray(k.evaluate(nn, xi_grid), dtype=float)
        values[k.label] = vals
        errors[k.label] = _signed_error(vals, theta_ref)
        if k.name == "picard":
            picard_above = vals > theta_ref
    return ErrorReport(n=nn, xi=xi_grid, theta_ref=theta_ref,
                       values=values, errors=errors,
                       picard_above=picard_above)
