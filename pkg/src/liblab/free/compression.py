"""The law of a product of two free projections of traces alpha and beta."""
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ..config import config
from ..errors import CapacityError, ValidationError
from .moments import MomentSequence


@dataclass(frozen=True)
class CompressionLaw:
    alpha: float
    beta: float
    atom0: float
    atom1: float
    lambda_minus: float
    lambda_plus: float

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "atom0": self.atom0,
            "atom1": self.atom1,
            "lambda_minus": self.lambda_minus,
            "lambda_plus": self.lambda_plus,
        }


def compression_law(alpha: float, beta: float) -> CompressionLaw:
    """
    Atoms and support of the law of pqp for free projections p, q.

    Args:
        alpha: Trace of p, in (0, 1)
        beta: Trace of q, in (0, 1)
    """
    for name, value in (("alpha", alpha), ("beta", beta)):
        if not 0.0 < value < 1.0:
            raise ValidationError(f"{name} must lie in (0, 1), got {value}")
    centre = alpha + beta - 2 * alpha * beta
    spread = math.sqrt(4 * alpha * beta * (1 - alpha) * (1 - beta))
    return CompressionLaw(
        alpha=alpha,
        beta=beta,
        atom0=1 - min(alpha, beta),
        atom1=max(alpha + beta - 1, 0.0),
        lambda_minus=min(max(centre - spread, 0.0), 1.0),
        lambda_plus=min(max(centre + spread, 0.0), 1.0),
    )


def compression_density(law: CompressionLaw, x):
    """sqrt((l+ - x)(x - l-)) / (2 pi x (1 - x)) on the open support, else 0."""
    points = np.asarray(x, dtype=float)
    inside = (points > law.lambda_minus) & (points < law.lambda_plus) & (points > 0) & (points < 1)
    safe = np.where(inside, points, 0.5)
    values = np.sqrt(np.clip((law.lambda_plus - safe) * (safe - law.lambda_minus), 0.0, None))
    density = np.where(inside, values / (2 * np.pi * safe * (1 - safe)), 0.0)
    return float(density) if density.ndim == 0 else density


def _continuous_moment(law: CompressionLaw, k: int) -> float:
    # x = l- + D sin^2(t) turns the square-root edges into a smooth integrand.
    lo = law.lambda_minus
    width = law.lambda_plus - law.lambda_minus
    if width <= 0:
        return 0.0

    def integrand(theta: float) -> float:
        s = math.sin(theta) ** 2
        c = 1.0 - s
        x = lo + width * s
        one_minus = 1.0 - lo - width * s
        if x <= 0.0 or one_minus <= 0.0:
            return 0.0
        return (width**2 / math.pi) * (s / x) * (c / one_minus) * x**k

    value, _ = integrate.quad(integrand, 0.0, math.pi / 2, epsabs=config.QUAD_TOL, epsrel=config.QUAD_TOL, limit=200)
    return float(value)


def compression_total_mass(law: CompressionLaw) -> float:
    """atom0 + atom1 + integral of the density; equals 1 up to quadrature error."""
    return law.atom0 + law.atom1 + _continuous_moment(law, 0)


def law_moments_by_quadrature(law: CompressionLaw, order: int) -> MomentSequence:
    """m_k = atom1 + integral of x^k times the density, for k = 1..order."""
    if order > config.MAX_QUADRATURE_K:
        raise CapacityError(f"quadrature moment order {order} exceeds cap {config.MAX_QUADRATURE_K}")
    values = tuple(law.atom1 + _continuous_moment(law, k) for k in range(1, order + 1))
    return MomentSequence(values, radius_hint=1.0, validate=False)
