"""Shared cached solver calls; integration is the dominant test cost."""

from __future__ import annotations

import functools

import pytest

import polytrope as pt


@functools.lru_cache(maxsize=64)
def _emden(n: float, tol: float = 1e-12) -> pt.EmdenSolution:
    return pt.integrate_emden(n, tol=tol)


@functools.lru_cache(maxsize=32)
def _curve(n: float, tol: float = 1e-11) -> pt.InvariantCurve:
    return pt.solve_uw_plane(n, tol=tol)


@pytest.fixture(scope="session")
def emden():
    """Cached integrate_emden: emden(n, tol=1e-12)."""
    return _emden


@pytest.fixture(scope="session")
def uw_curve():
    """Cached solve_uw_plane: uw_curve(n, tol=1e-11)."""
    return _curve
