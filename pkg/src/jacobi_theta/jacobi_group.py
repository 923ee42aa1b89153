"""Elements of Gamma_0(N) with lattice translations, their action and automorphy factors."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonconvergentInput, NotCongruent, NotUnimodular


@dataclass(frozen=True)
class JacobiGroupElement:
    """``gamma = (a b; c d)`` in Gamma_0(N), optionally with a translation ``(lambda, mu)``."""

    a: int
    b: int
    c: int
    d: int
    N: int = 1
    lam: tuple[int, ...] = field(default=())
    mu: tuple[int, ...] = field(default=())

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "N"):
            object.__setattr__(self, name, int(getattr(self, name)))
        object.__setattr__(self, "lam", tuple(int(t) for t in self.lam))
        object.__setattr__(self, "mu", tuple(int(t) for t in self.mu))
        if self.N <= 0:
            raise ValueError("level N must be positive")
        if self.a * self.d - self.b * self.c != 1:
            raise NotUnimodular(f"ad - bc = {self.a * self.d - self.b * self.c}, expected 1")
        if self.c % self.N:
            raise NotCongruent(f"c = {self.c} is not divisible by N = {self.N}")
        if self.mu and len(self.mu) != len(self.lam):
            raise DimensionMismatch("lambda and mu must have the same length")

    @property
    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, other: JacobiGroupElement) -> JacobiGroupElement:
        """Matrix product; the result lives in Gamma_0 of the common level."""
        return compose(self, other)

    def with_translation(self, lam, mu=None) -> JacobiGroupElement:
        lam = tuple(lam)
        mu = tuple(mu) if mu is not None else (0,) * len(lam)
        return JacobiGroupElement(self.a, self.b, self.c, self.d, self.N, lam, mu)


def gamma0_element(a: int, b: int, c: int, d: int, N: int = 1) -> JacobiGroupElement:
    """Validated element of Gamma_0(N); raises NotUnimodular or NotCongruent."""
    return JacobiGroupElement(a, b, c, d, N)


def compose(g1: JacobiGroupElement, g2: JacobiGroupElement) -> JacobiGroupElement:
    a = g1.a * g2.a + g1.b * g2.c
    b = g1.a * g2.b + g1.b * g2.d
    c = g1.c * g2.a + g1.d * g2.c
    d = g1.c * g2.b + g1.d * g2.d
    return JacobiGroupElement(a, b, c, d, math.gcd(g1.N, g2.N))


def _cz(gamma: JacobiGroupElement, tau: complex) -> complex:
    return gamma.c * tau + gamma.d


def act(gamma: JacobiGroupElement, tau: complex, z) -> tuple[complex, np.ndarray]:
    """``(gamma tau, gamma z) = ((a tau + b)/(c tau + d), z/(c tau + d))``."""
    tau = complex(tau)
    if not tau.imag > 0:
        raise NonconvergentInput(f"Im(tau) = {tau.imag} must be positive")
    j = _cz(gamma, tau)
    gt = (gamma.a * tau + gamma.b) / j
    assert gt.imag > 0
    return gt, np.asarray(z, dtype=complex) / j


def _quad_form(F, x) -> complex:
    F = np.asarray(F, dtype=float)
    x = np.asarray(x, dtype=complex)
    if F.shape != (len(x), len(x)):
        raise DimensionMismatch(f"index matrix of shape {F.shape} does not match vector length {len(x)}")
    return complex(x @ F @ x)


def modular_factor(gamma: JacobiGroupElement, weight: int, F, tau: complex, z) -> complex:
    """``(c tau + d)^weight exp(2 pi i c F[z] / (c tau + d))``; the power is an integer power."""
    j = _cz(gamma, complex(tau))
    if gamma.c == 0:
        return j ** int(weight)
    return j ** int(weight) * cmath.exp(2j * math.pi * gamma.c * _quad_form(F, z) / j)


def elliptic_factor(F, tau: complex, z, lam, mu=None) -> complex:
    """``exp(-2 pi i (tau F[lambda] + 2 z^T F lambda))``; ``mu`` never enters."""
    F = np.asarray(F, dtype=float)
    lam = np.asarray(lam, dtype=float)
    z = np.asarray(z, dtype=complex)
    if mu is not None and len(mu) != len(lam):
        raise DimensionMismatch("lambda and mu must have the same length")
    if not np.any(lam):
        return 1 + 0j
    arg = complex(tau) * _quad_form(F, lam) + 2 * complex(z @ F @ lam)
    return cmath.exp(-2j * math.pi * arg)
