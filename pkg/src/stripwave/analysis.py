"""Constructive checks on the boundary-layer Fourier machinery.

The linearized top-boundary problem in the strip, solved by partial
Fourier transform in x, has solution kernels whose denominator is

    F(xi) = d beta sinh(beta L) (1 + eps D xi^2 / mu + eps (c0 + c1 eps) i xi / mu)
          + (D xi^2 / mu + (c0 + c1 eps) i xi / mu) cosh(beta L),
    beta(xi) = sqrt(xi^2 + 1).

Well-posedness of the kernel inversion needs F to be zero-free on the
real axis with quadratic (or better) growth at infinity, which
scan_symbol_zero_free verifies numerically; the complex-strip pole
analysis is out of scope here.

The kernel asymptotics involve the modified Bessel function K0, whose
Fourier transform is pi / sqrt(1 + xi^2); consequently
(1/(pi d eps)) K0(|x|/(d eps)) is an approximation to the identity, its
mass being exactly 1.  bessel_k0 evaluates K0 by direct quadrature of
the defining integral so it stays independently verifiable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError
from .model import ModelParams


@dataclass(frozen=True)
class SymbolQuery:
    """One evaluation point of the boundary symbol denominator."""

    xi: float
    epsilon: float
    c0: float
    c1: float
    params: ModelParams

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")


def wentzell_symbol_denominator(q: SymbolQuery) -> complex:
    """F(xi) as defined in the module docstring."""
    d, D, mu, L = q.params.d, q.params.D, q.params.mu, q.params.L
    xi = q.xi
    beta = math.sqrt(xi * xi + 1.0)
    speed = q.c0 + q.c1 * q.epsilon
    wentzell_part = (D * xi * xi + speed * 1j * xi) / mu
    return (d * beta * math.sinh(beta * L) * (1.0 + q.epsilon * wentzell_part)
            + wentzell_part * math.cosh(beta * L))


def scan_symbol_zero_free(params: ModelParams, epsilon: float, c0: float, c1: float,
                          xi_max: float, n: int) -> float:
    """Minimum of |F| over n uniform real frequencies in [-xi_max, xi_max].

    A strictly positive return certifies the real-axis restriction of
    the zero-free strip; the margin is the returned value itself.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if xi_max <= 0:
        raise ValueError("xi_max must be positive")
    xi = np.linspace(-xi_max, xi_max, n)
    beta = np.sqrt(xi * xi + 1.0)
    speed = c0 + c1 * epsilon
    with np.errstate(over="ignore"):
        wentzell_part = (params.D * xi * xi + speed * 1j * xi) / params.mu
        F = (params.d * beta * np.sinh(beta * params.L) * (1.0 + epsilon * wentzell_part)
             + wentzell_part * np.cosh(beta * params.L))
        return float(np.abs(F).min())


def symbol_scan_table(params: ModelParams, epsilon: float, c0: float, c1: float,
                      xi_max: float, n: int) -> np.ndarray:
    """Columns (xi, Re F, Im F, |F|) for the CSV emitter."""
    xi = np.linspace(-xi_max, xi_max, n)
    rows = np.empty((n, 4))
    for k, x in enumerate(xi):
        F = wentzell_symbol_denominator(SymbolQuery(xi=float(x), epsilon=epsilon,
                                                    c0=c0, c1=c1, params=params))
        rows[k] = (x, F.real, F.imag, abs(F))
    return rows


def bessel_k0(x: float) -> float:
    """K0(x) for x > 0 by adaptive quadrature of int_0^inf exp(-x cosh t) dt.

    The integrand is truncated where it falls below 1e-16, i.e. at
    t = arccosh(37/x) when 37/x > 1; accuracy is 1e-8 or better.
    """
    if x <= 0:
        raise DomainError(f"bessel_k0 requires x > 0, got {x}")
    ratio = 37.0 / x
    t_cut = math.acosh(ratio) + 1.0 if ratio > 1.0 else 1.0
    value, _ = quad(lambda t: math.exp(-x * math.cosh(t)), 0.0, t_cut,
                    epsabs=1e-12, epsrel=1e-12, limit=200)
    return float(value)


def k0_line_mass() -> float:
    """int over R of K0(|x|) dx, expected pi (the Fourier transform of
    K0(|x|) at frequency zero)."""
    half, _ = quad(bessel_k0, 0.0, 45.0, epsabs=1e-10, epsrel=1e-10, limit=200)
    return 2.0 * half


def approximation_identity_mass(d: float, epsilon: float) -> float:
    """Mass of the kernel family (1/(pi d eps)) K0(|x|/(d eps)), expected 1.

    Integrated without rescaling the variable, so small eps genuinely
    exercises the concentration of the kernel.
    """
    if d <= 0 or epsilon <= 0:
        raise DomainError("approximation_identity_mass needs d > 0 and epsilon > 0")
    scale = d * epsilon
    half, _ = quad(lambda x: bessel_k0(x / scale), 0.0, 45.0 * scale,
                   epsabs=1e-10, epsrel=1e-10, limit=200)
    return 2.0 * half / (math.pi * scale)
