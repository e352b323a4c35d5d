"""Finite-gap data for the four-coupling elliptic Heun operator."""
from .case import Case, get_case
from .elliptic import (Lattice, co_sigma, co_wp, lattice_from_branch_points,
                       lattice_from_half_periods, sigma, wp, wp_inverse, wp_prime, zeta)
from .finitegap import HeunSet, covering_map, heun_set, structural_report
from .hka import CoverPoint, cover_point, degenerate_point, validate_covering
from .polyalg import Poly, RatE
from .xi import Couplings, XiData, build_Q, build_xi, symmetry_transport

__version__ = "0.1.0"

__all__ = [
    "Case", "CoverPoint", "Couplings", "HeunSet", "Lattice", "Poly", "RatE", "XiData",
    "build_Q", "build_xi", "co_sigma", "co_wp", "cover_point", "covering_map",
    "degenerate_point", "get_case", "heun_set", "lattice_from_branch_points",
    "lattice_from_half_periods", "sigma", "structural_report", "symmetry_transport",
    "validate_covering", "wp", "wp_inverse", "wp_prime", "zeta",
]
