"""Weierstrass elliptic functions on a lattice 2*omega1*Z + 2*omega3*Z.

Evaluation goes through Jacobi theta series in the nome q = exp(i*pi*tau),
tau = omega3/omega1, after reducing the argument to the fundamental cell.
All point functions accept scalars or numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import elliprf

from .errors import DegenerateLattice, NotOnCurve, PoleAtArgument


class _Theta:
    """Theta series truncated for a fixed nome."""

    def __init__(self, tau: complex, tol: float):
        self.tau = tau
        # terms decay like exp(-pi*Im(tau)*(n^2 - 1/4)) on the reduced cell
        n = int(math.ceil(math.sqrt(-math.log(tol * 1e-6) / (math.pi * tau.imag)))) + 3
        k = np.arange(n + 1)
        half = k + 0.5
        self.odd = 2 * k + 1
        self.q_half = np.exp(1j * np.pi * tau * half ** 2)
        self.sgn = (-1.0) ** k
        self.q_int = np.exp(1j * np.pi * tau * k[1:] ** 2.0)
        self.even = 2 * k[1:]
        self.sgn_int = (-1.0) ** k[1:]

    def th1(self, v, d=0):
        """d-th derivative of theta1 in v (d = 0..3)."""
        v = np.asarray(v, dtype=complex)[..., None]
        arg = self.odd * v
        w = self.sgn * self.q_half * self.odd ** d
        trig = [np.sin, np.cos, lambda a: -np.sin(a), lambda a: -np.cos(a)][d](arg)
        return 2 * np.sum(w * trig, axis=-1)

    def th2(self, v, d=0):
        v = np.asarray(v, dtype=complex)[..., None]
        arg = self.odd * v
        w = self.q_half * self.odd ** d
        trig = [np.cos, lambda a: -np.sin(a)][d](arg)
        return 2 * np.sum(w * trig, axis=-1)

    def th3(self, v):
        v = np.asarray(v, dtype=complex)[..., None]
        return 1 + 2 * np.sum(self.q_int * np.cos(self.even * v), axis=-1)

    def th4(self, v):
        v = np.asarray(v, dtype=complex)[..., None]
        return 1 + 2 * np.sum(self.sgn_int * self.q_int * np.cos(self.even * v), axis=-1)


@dataclass(frozen=True)
class Lattice:
    omega1: complex
    omega3: complex
    omega2: complex
    e: tuple
    eta: tuple
    g2: complex
    g3: complex
    tol: float = 1e-12
    _theta: _Theta = field(default=None, repr=False, compare=False)

    def omega(self, k: int) -> complex:
        return (0j, self.omega1, self.omega2, self.omega3)[k]

    def eta_k(self, k: int) -> complex:
        return (0j, *self.eta)[k]

    @property
    def tau(self):
        return self.omega3 / self.omega1

    @property
    def discriminant(self):
        return self.g2 ** 3 - 27 * self.g3 ** 2


def lattice_from_half_periods(omega1: complex, omega3: complex, tol: float = 1e-12) -> Lattice:
    omega1, omega3 = complex(omega1), complex(omega3)
    if omega1 == 0 or (omega3 / omega1).imag <= 0:
        raise DegenerateLattice("need Im(omega3/omega1) > 0")
    tau = omega3 / omega1
    th = _Theta(tau, tol)
    t2 = complex(th.th2(0.0))
    t4 = complex(th.th4(0.0))
    scale = np.pi ** 2 / (12 * omega1 ** 2)
    e1 = scale * (t2 ** 4 + 2 * t4 ** 4)
    e2 = scale * (t2 ** 4 - t4 ** 4)
    e3 = -scale * (2 * t2 ** 4 + t4 ** 4)
    g2 = -4 * (e1 * e2 + e2 * e3 + e3 * e1)
    g3 = 4 * e1 * e2 * e3
    disc = g2 ** 3 - 27 * g3 ** 2
    if abs(disc) <= tol * max(1.0, abs(g2) ** 3, abs(g3) ** 2):
        raise DegenerateLattice("vanishing discriminant")
    eta1 = -(np.pi ** 2 / (12 * omega1)) * complex(th.th1(0.0, 3)) / complex(th.th1(0.0, 1))
    omega2 = -omega1 - omega3
    # eta3 from the theta quotient at omega3 (not forced by the Legendre relation)
    v3 = np.pi * omega3 / (2 * omega1)
    eta3 = eta1 * omega3 / omega1 + (np.pi / (2 * omega1)) * complex(th.th1(v3, 1) / th.th1(v3))
    eta2 = -eta1 - eta3
    return Lattice(omega1, omega3, omega2, (e1, e2, e3), (eta1, eta2, eta3), g2, g3, tol, th)


def _agm(a: float, b: float) -> float:
    for _ in range(100):
        a, b = (a + b) / 2, math.sqrt(a * b)
        if abs(a - b) <= 1e-16 * a:
            break
    return (a + b) / 2


def lattice_from_branch_points(e1, e2, e3, tol: float = 1e-12) -> Lattice:
    """Lattice with real branch points e_k = wp(omega_k) in the given order."""
    es = [Fraction(e1), Fraction(e2), Fraction(e3)]
    if sum(es) != 0:
        raise DegenerateLattice("branch points must sum to zero")
    if len(set(es)) < 3:
        raise DegenerateLattice("repeated branch point")
    hi, mid, lo = sorted((float(x) for x in es), reverse=True)
    w_hi = math.pi / (2 * _agm(math.sqrt(hi - lo), math.sqrt(hi - mid)))
    w_lo = 1j * math.pi / (2 * _agm(math.sqrt(hi - lo), math.sqrt(mid - lo)))
    half = {hi: complex(w_hi), lo: w_lo, mid: -(w_hi + w_lo)}
    w1 = half[float(es[0])]
    w3 = half[float(es[2])]
    if (w3 / w1).imag < 0:
        w3 = -w3
    lat = lattice_from_half_periods(w1, w3, tol)
    for k, target in enumerate(es):
        if abs(lat.e[k] - float(target)) > 1e-8 * max(1.0, abs(float(target))):
            raise DegenerateLattice("branch point reconstruction failed")
    return lat


# --- point functions ---------------------------------------------------------

def _reduce(z, L: Lattice):
    """Split z = z0 + 2m*omega1 + 2n*omega3 with z0 in the centred cell."""
    z = np.asarray(z, dtype=complex)
    w1, w3 = L.omega1, L.omega3
    # solve z = 2a*w1 + 2b*w3 for real a, b
    A = np.array([[w1.real, w3.real], [w1.imag, w3.imag]]) * 2
    rhs = np.stack([z.real, z.imag])
    sol = np.linalg.solve(A, rhs.reshape(2, -1)).reshape((2,) + z.shape)
    m = np.round(sol[0])
    n = np.round(sol[1])
    z0 = z - 2 * m * w1 - 2 * n * w3
    return z0, m, n


def _v(z0, L):
    return np.pi * z0 / (2 * L.omega1)


def _scalar(out, like):
    return complex(out) if np.ndim(like) == 0 else out


def _check_pole(th1v, z):
    if np.any(th1v == 0) or np.any(np.abs(th1v) < 1e-300):
        raise PoleAtArgument(f"argument at a lattice point: {z}")


def wp(z, L: Lattice):
    z0, _, _ = _reduce(z, L)
    th = L._theta
    v = _v(z0, L)
    t1 = th.th1(v)
    _check_pole(t1, z)
    c = (np.pi / (2 * L.omega1)) * complex(th.th3(0.0)) * complex(th.th4(0.0))
    out = L.e[0] + (c * th.th2(v) / t1) ** 2
    return _scalar(out, z)


def wp_prime(z, L: Lattice):
    z0, _, _ = _reduce(z, L)
    th = L._theta
    v = _v(z0, L)
    t1 = th.th1(v)
    _check_pole(t1, z)
    k = np.pi / (2 * L.omega1)
    c = k * complex(th.th3(0.0)) * complex(th.th4(0.0))
    t2 = th.th2(v)
    f = t2 / t1
    fz = k * (th.th2(v, 1) * t1 - t2 * th.th1(v, 1)) / t1 ** 2
    out = 2 * c ** 2 * f * fz
    return _scalar(out, z)


def zeta(z, L: Lattice):
    z0, m, n = _reduce(z, L)
    th = L._theta
    v = _v(z0, L)
    t1 = th.th1(v)
    _check_pole(t1, z)
    eta1, _, eta3 = L.eta
    out = (eta1 * z0 / L.omega1 + (np.pi / (2 * L.omega1)) * th.th1(v, 1) / t1
           + 2 * m * eta1 + 2 * n * eta3)
    return _scalar(out, z)


def sigma(z, L: Lattice):
    z0, m, n = _reduce(z, L)
    th = L._theta
    v = _v(z0, L)
    eta1, _, eta3 = L.eta
    base = (2 * L.omega1 / np.pi) * np.exp(eta1 * z0 ** 2 / (2 * L.omega1)) * th.th1(v) / complex(th.th1(0.0, 1))
    # sigma(z0 + 2W) = (-1)^(m+n+mn) exp(2H (z0 + W)) sigma(z0), W = m w1 + n w3, H = m eta1 + n eta3
    W = m * L.omega1 + n * L.omega3
    H = m * eta1 + n * eta3
    sign = (-1.0) ** ((m + n + m * n) % 2)
    out = sign * np.exp(2 * H * (z0 + W)) * base
    return _scalar(out, z)


def co_sigma(z, k: int, L: Lattice):
    """sigma_k(z) = exp(-eta_k z) sigma(z + omega_k) / sigma(omega_k)."""
    wk = L.omega(k)
    ek = L.eta[k - 1]
    z = np.asarray(z, dtype=complex)
    out = np.exp(-ek * z) * sigma(z + wk, L) / sigma(wk, L)
    return _scalar(out, z)


def co_wp(z, k: int, L: Lattice):
    """wp_k(z) = sigma_k(z)/sigma(z); squares to wp(z) - e_k."""
    z = np.asarray(z, dtype=complex)
    out = co_sigma(z, k, L) / sigma(z, L)
    return _scalar(out, z)


def on_curve_residual(v, vp, L: Lattice) -> float:
    r = vp ** 2 - (4 * v ** 3 - L.g2 * v - L.g3)
    return abs(r) / max(1.0, abs(v) ** 3)


def wp_inverse(v: complex, v_prime: complex, L: Lattice) -> complex:
    """t in the fundamental cell with wp(t) = v and wp'(t) = v_prime."""
    v, v_prime = complex(v), complex(v_prime)
    if on_curve_residual(v, v_prime, L) > 1e-6:
        raise NotOnCurve(f"({v}, {v_prime}) is not on the curve")
    e1, e2, e3 = L.e
    scale = max(1.0, abs(v))
    if min(abs(v - e) for e in L.e) < 1e-13 * scale:
        k = int(np.argmin([abs(v - e) for e in L.e]))
        return complex(_reduce(L.omega(k + 1), L)[0])
    t = complex(elliprf(v - e1, v - e2, v - e3))
    if not np.isfinite(t):
        # all three differences on the negative axis; RF is homogeneous of degree -1/2
        t = 1j * complex(elliprf(e1 - v, e2 - v, e3 - v))
    if not np.isfinite(t) or abs(wp(t, L) - v) > 1e-6 * scale:
        t = _inverse_by_search(v, L)
    for _ in range(3):
        d = wp_prime(t, L)
        if d == 0:
            break
        step = (wp(t, L) - v) / d
        t -= step
        if abs(step) < 1e-17 * max(1.0, abs(t)):
            break
    if abs(wp_prime(t, L) + v_prime) < abs(wp_prime(t, L) - v_prime):
        t = -t
    return complex(_reduce(t, L)[0])


def _inverse_by_search(v, L):
    a = np.linspace(-0.45, 0.45, 19)
    A, B = np.meshgrid(a, a)
    grid = (2 * A * L.omega1 + 2 * B * L.omega3).ravel()
    grid = grid[np.abs(grid) > 1e-3]
    vals = np.abs(wp(grid, L) - v)
    t = complex(grid[int(np.argmin(vals))])
    for _ in range(40):
        t -= (wp(t, L) - v) / wp_prime(t, L)
    return t
