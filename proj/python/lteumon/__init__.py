"""Duty-cycle estimation and violation detection for LTE-U/Wi-Fi coexistence."""

from ._core import (
    decide,
    exceedance_probability,
    generate_schedule,
    irwin_hall_cdf,
    pd_pfa_curve,
    simulate_estimate,
    wilson_interval,
)

__all__ = [
    "decide",
    "exceedance_probability",
    "generate_schedule",
    "irwin_hall_cdf",
    "pd_pfa_curve",
    "simulate_estimate",
    "wilson_interval",
]
