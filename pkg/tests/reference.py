"""Published reference values asserted by the regression tests.

Strings preserve the printed precision; one unit in the last printed
digit is the default comparison tolerance, with a few explicitly wider
entries used where the sources themselves round more coarsely.
"""

from __future__ import annotations

from decimal import Decimal

#: columns: scaling exponent 2/(n-1), surface radius, rho_c/rho_mean,
#: surface constant omega0, core radius fraction, core mass fraction
TABLE_CONSTANTS: dict[float, dict[str, str | None]] = {
    0.0: dict(xi1="2.449", rho_ratio="1", omega0="0.333", r_core="1", m_core="1"),
    1.0: dict(xi1="3.142", rho_ratio="3.290", omega0=None, r_core="0.66", m_core="0.60"),
    1.5: dict(xi1="3.654", rho_ratio="5.991", omega0="132.4", r_core="0.55", m_core="0.51"),
    2.0: dict(xi1="4.353", rho_ratio="11.403", omega0="10.50", r_core="0.41", m_core="0.41"),
    3.0: dict(xi1="6.897", rho_ratio="54.183", omega0="2.018", r_core="0.24", m_core="0.31"),
    4.0: dict(xi1="14.972", rho_ratio="622.408", omega0="0.729", r_core="0.13", m_core="0.24"),
    4.5: dict(xi1="31.836", rho_ratio="6189.47", omega0="0.394", r_core="0.08", m_core="0.22"),
}

#: explicitly stated wider tolerances (column, n) -> absolute tolerance
TOLERANCE_OVERRIDES: dict[tuple[str, float], float] = {
    ("rho_ratio", 4.5): 0.5,
    ("omega0", 1.5): 0.2,
}


def last_digit_unit(printed: str) -> float:
    """One unit in the last printed decimal digit of a value string."""
    exp = Decimal(printed).as_tuple().exponent
    return float(Decimal(1).scaleb(exp))


def printed_tolerance(column: str, n: float) -> float:
    if (column, n) in TOLERANCE_OVERRIDES:
        return TOLERANCE_OVERRIDES[(column, n)]
    return last_digit_unit(TABLE_CONSTANTS[n][column])


def printed_value(column: str, n: float) -> float | None:
    raw = TABLE_CONSTANTS[n][column]
    return None if raw is None else float(raw)
