"""
Closed-form random matrix quantities for the sample covariance of K sensors
observing N samples, with aspect ratio alpha = K / N.

Under noise only, the eigenvalues of (1/N) Y Y^H follow the Marchenko-Pastur
law supported on [a, b]. A single received signal adds a spike whose top
eigenvalue leaves the bulk at b' once the SNR exceeds sqrt(alpha).

Only 0 < alpha < 1 is supported. The point mass (1 - 1/alpha)^+ at zero is
therefore always empty and never evaluated.
"""
from typing import Union, Sequence

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import integrate

from .errors import (
    DomainError, UnsupportedRegimeError, DegenerateSpikeError,
    NotDetectableError, InfeasibleRatioError
)

ArrayLike = Union[float, Sequence[float], np.ndarray]


def _check_alpha(alpha: float) -> None:
    if not alpha > 0:
        raise DomainError(f'alpha must be in (0,1), got {alpha=}')
    if alpha >= 1:
        raise UnsupportedRegimeError(f'alpha must be in (0,1), got {alpha=}')


def _check_sigma2(sigma2: float) -> None:
    if not sigma2 > 0:
        raise DomainError(f'sigma2 must be > 0, got {sigma2=}')


def to_db(value: float) -> float:
    if not value > 0:
        raise DomainError(f'Only positive ratios have a dB value, got {value=}')
    return 10.0 * math.log10(value)


def from_db(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


@dataclass(frozen=True)
class MpSupport:
    """ Marchenko-Pastur support for noise variance sigma2 and ratio alpha """
    sigma2: float
    alpha: float

    def __post_init__(self) -> None:
        _check_sigma2(self.sigma2)
        _check_alpha(self.alpha)

    @property
    def a(self) -> float:
        return self.sigma2 * (1 - math.sqrt(self.alpha)) ** 2

    @property
    def b(self) -> float:
        return self.sigma2 * (1 + math.sqrt(self.alpha)) ** 2

    @property
    def ratio_threshold(self) -> float:
        return ratio_threshold(self.alpha)

    def contains(self, x: float) -> bool:
        return self.a <= x <= self.b


def mp_support(sigma2: float, alpha: float) -> MpSupport:
    return MpSupport(sigma2=float(sigma2), alpha=float(alpha))


def mp_density(x: ArrayLike, support: MpSupport) -> Union[float, np.ndarray]:
    """ Continuous part of the MP density, zero outside [a, b]

    Accepts a scalar or an array of strictly positive points.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise DomainError('mp_density is only defined for x > 0')

    a, b = support.a, support.b
    inside = np.clip(arr - a, 0, None) * np.clip(b - arr, 0, None)
    density = np.sqrt(inside) / (2 * math.pi * support.alpha * support.sigma2 * arr)

    if density.ndim == 0:
        return float(density)
    return density


def mp_cdf(x: float, support: MpSupport) -> float:
    """ P(lambda <= x) under the MP law, by adaptive quadrature """
    if x <= support.a:
        return 0.0
    if x >= support.b:
        return 1.0
    mass, _ = integrate.quad(lambda t: mp_density(t, support), support.a, x,
                             epsabs=1e-10, epsrel=1e-8, limit=200)
    return float(min(max(mass, 0.0), 1.0))


def ratio_threshold(alpha: float) -> float:
    """ (1 + sqrt(alpha))^2 / (1 - sqrt(alpha))^2, the H0 limit of lmax/lmin """
    _check_alpha(alpha)
    root = math.sqrt(alpha)
    return ((1 + root) / (1 - root)) ** 2


def baik_detectable(alpha: float, rho: float) -> bool:
    """ Whether the spike separates from the bulk: alpha < 1 and rho > sqrt(alpha) """
    if not alpha > 0:
        raise DomainError(f'alpha must be > 0, got {alpha=}')
    return alpha < 1 and rho > math.sqrt(alpha)


@dataclass(frozen=True)
class SpikedModel:
    """ H1 quantities for total channel energy sum |h_i|^2 over noise sigma2 """
    channel_energy: float
    sigma2: float
    alpha: float

    @property
    def rho(self) -> float:
        return self.channel_energy / self.sigma2

    @property
    def rho_db(self) -> float:
        return to_db(self.rho)

    @property
    def b_prime(self) -> float:
        return (self.channel_energy + self.sigma2) * (1 + self.alpha / self.rho)

    @property
    def detectable(self) -> bool:
        return baik_detectable(self.alpha, self.rho)

    @property
    def support(self) -> MpSupport:
        return mp_support(self.sigma2, self.alpha)

    @property
    def asymptotic_ratio(self) -> float:
        """ b' / a, the limit of lmax/lmin when the spike is detectable """
        return self.b_prime / self.support.a


def spiked_top_eigenvalue(
    channel_energy: float,
    sigma2: float,
    alpha: float
) -> SpikedModel:
    if channel_energy == 0:
        raise DegenerateSpikeError('channel_energy is 0, there is no spike (H0)')
    if channel_energy < 0:
        raise DomainError(f'channel_energy must be > 0, got {channel_energy=}')
    _check_sigma2(sigma2)
    _check_alpha(alpha)
    return SpikedModel(float(channel_energy), float(sigma2), float(alpha))


def spiked_ratio(rho: float, alpha: float) -> float:
    """ b'/a = (rho + 1)(1 + alpha/rho) / (1 - sqrt(alpha))^2, free of sigma2 """
    _check_alpha(alpha)
    if not rho > 0:
        raise DomainError(f'rho must be > 0, got {rho=}')
    return (rho + 1) * (1 + alpha / rho) / (1 - math.sqrt(alpha)) ** 2


def snr_from_ratio(r: float, alpha: float) -> float:
    """ Inverts spiked_ratio for rho.

    Clearing denominators gives rho^2 + (1 + alpha - c) rho + alpha = 0 with
    c = r (1 - sqrt(alpha))^2. The larger root is returned since only
    rho > sqrt(alpha) can produce a ratio above the H0 threshold.
    """
    threshold = ratio_threshold(alpha)
    if not r > threshold:
        raise NotDetectableError(f'ratio {r} is not above the H0 threshold'
                                 + f' {threshold} for {alpha=}')

    c = r * (1 - math.sqrt(alpha)) ** 2
    half_b = 0.5 * (c - 1 - alpha)
    discriminant = half_b * half_b - alpha
    if discriminant < 0:
        raise InfeasibleRatioError(f'No real SNR gives ratio {r} at {alpha=},'
                                   + f' {discriminant=}')
    return half_b + math.sqrt(discriminant)


def spectral_histogram(
    values: Sequence[float],
    support: MpSupport,
    bins: int = 30,
) -> pd.DataFrame:
    """ Empirical eigenvalue density next to the MP density, per bin

    The bin range covers both the eigenvalues and [a, b], so values escaping
    the support (a spike) show up as mass where the MP density is zero.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise DomainError('No eigenvalues to histogram')
    if bins < 1:
        raise DomainError(f'bins must be >= 1, got {bins=}')

    lo = min(float(values.min()), support.a)
    hi = max(float(values.max()), support.b)
    if hi <= lo:
        hi = lo + 1.0

    density, edges = np.histogram(values, bins=bins, range=(lo, hi), density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    mp = np.zeros_like(centers)
    positive = centers > 0
    if positive.any():
        mp[positive] = mp_density(centers[positive], support)

    return pd.DataFrame({
        'bin_low': edges[:-1],
        'bin_high': edges[1:],
        'center': centers,
        'empirical_density': density,
        'mp_density': mp,
        'outside_support': (centers < support.a) | (centers > support.b),
    })
