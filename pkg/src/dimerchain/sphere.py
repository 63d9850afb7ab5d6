"""Quadrature over the Bloch sphere, normalized so constant integrands average to themselves.

Product rule: Gauss-Legendre in cos(theta) times a uniform trapezoid in phi.
The protocol fidelities depend on (theta, phi) through at most second
harmonics, so the default 16 x 32 rule is exact to roundoff for them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SphereRule", "sphere_rule"]


@dataclass(frozen=True)
class SphereRule:
    thetas: np.ndarray
    phis: np.ndarray
    theta_weights: np.ndarray  # sum to 1 (the 1/4pi normalization is built in)

    @property
    def n_nodes(self) -> int:
        return self.thetas.size * self.phis.size

    def average(self, values: np.ndarray) -> float:
        """Spherical mean of integrand samples shaped (n_theta, n_phi)."""
        values = np.asarray(values)
        if values.shape != (self.thetas.size, self.phis.size):
            raise ValueError(
                f"expected samples shaped {(self.thetas.size, self.phis.size)}, got {values.shape}"
            )
        return float(self.theta_weights @ values.mean(axis=1))


def sphere_rule(n_theta: int = 16, n_phi: int = 32) -> SphereRule:
    x, w = np.polynomial.legendre.leggauss(n_theta)
    return SphereRule(
        thetas=np.arccos(x),
        phis=np.arange(n_phi) * (2.0 * np.pi / n_phi),
        theta_weights=w / 2.0,
    )
