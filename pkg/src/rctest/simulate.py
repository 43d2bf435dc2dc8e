"""Seeded bivariate generators: correlated white noise, twin AR(1), twin ARFIMA(0,d,0)."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

import numpy as np
from scipy.signal import fftconvolve, lfilter
from scipy.special import gammaln

from .series import BivariatePair

MASK64 = (1 << 64) - 1


def derive_seed(base: int, *keys) -> int:
    """Stable 64-bit child seed from a base seed and any printable keys.

    Independent of call order, so replicates can be computed in any
    sharding and merged afterwards.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(int(base & MASK64).to_bytes(8, "little"))
    for key in keys:
        h.update(b"\x1f")
        h.update(repr(key).encode())
    return int.from_bytes(h.digest(), "little")


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(int(seed) & MASK64)


def _innovations(rng: np.random.Generator, n: int, rho: float) -> tuple[np.ndarray, np.ndarray]:
    eps = rng.standard_normal(n)
    eta = rng.standard_normal(n)
    nu = rho * eps + np.sqrt(1.0 - rho * rho) * eta
    return eps, nu


def _check_rho(rho: float) -> None:
    if not -1.0 <= rho <= 1.0:
        raise ValueError(f"innovation correlation must lie in [-1, 1], got {rho}")


def gaussian_pair(T: int, rho: float, seed) -> BivariatePair:
    if T < 1:
        raise ValueError("T must be >= 1")
    _check_rho(rho)
    eps, nu = _innovations(_rng(seed), T, rho)
    return BivariatePair.from_arrays(eps, nu)


class Coupling(str, Enum):
    AS_PRINTED = "as_printed"  # y_t = theta2 * x_{t-1} + nu_t
    TRUE_AR1 = "true_ar1"  # y_t = theta2 * y_{t-1} + nu_t


@dataclass(frozen=True)
class Ar1PairSpec:
    theta1: float
    theta2: float
    rho: float
    T: int
    burnin: int = 1000
    coupling: Coupling = Coupling.TRUE_AR1

    def __post_init__(self):
        if not (abs(self.theta1) < 1 and abs(self.theta2) < 1):
            raise ValueError("nonstationary AR coefficient: need |theta| < 1")
        _check_rho(self.rho)
        if self.T < 1 or self.burnin < 0:
            raise ValueError("need T >= 1 and burnin >= 0")
        object.__setattr__(self, "coupling", Coupling(self.coupling))

    @property
    def hurst(self) -> tuple[float, float]:
        return 0.5, 0.5


@dataclass(frozen=True)
class ArfimaPairSpec:
    """Twin ARFIMA(0,d,0) pair driven by correlated innovations.

    ``method="truncated"`` sums the MA(inf) representation up to ``trunc``
    lags. ``method="circulant"`` draws the exact stationary process by
    circulant embedding of the autocovariance; it needs ``d1 == d2`` and
    ignores ``trunc``. The truncated sum loses a lot of low-frequency power
    (the MA weights are not summable), which matters for partial-sum scaling.
    """

    d1: float
    d2: float
    rho: float
    T: int
    trunc: Optional[int] = None
    method: str = "truncated"

    def __post_init__(self):
        for d in (self.d1, self.d2):
            _check_d(d)
        _check_rho(self.rho)
        if self.T < 1:
            raise ValueError("T must be >= 1")
        if self.method not in ("truncated", "circulant"):
            raise ValueError(f"unknown ARFIMA method {self.method!r}")
        if self.method == "circulant" and self.d1 != self.d2:
            raise ValueError("circulant method needs d1 == d2")
        if self.trunc is None:
            object.__setattr__(self, "trunc", max(self.T, 10_000))
        elif self.trunc < 1:
            raise ValueError("trunc must be >= 1")

    @property
    def hurst(self) -> tuple[float, float]:
        return self.d1 + 0.5, self.d2 + 0.5


def _check_d(d: float) -> None:
    if not 0.0 < d < 0.5:
        raise ValueError(f"fractional parameter d must lie in (0, 0.5), got {d}")


def _ar1_arrays(spec: Ar1PairSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    # main stream first so theta=0 reproduces gaussian_pair(T, rho, seed) exactly
    eps, nu = _innovations(rng, spec.T, spec.rho)
    if spec.burnin:
        eps_b, nu_b = _innovations(rng, spec.burnin, spec.rho)
        eps, nu = np.concatenate([eps_b, eps]), np.concatenate([nu_b, nu])
    x = lfilter([1.0], [1.0, -spec.theta1], eps)
    if spec.coupling is Coupling.TRUE_AR1:
        y = lfilter([1.0], [1.0, -spec.theta2], nu)
    else:
        y = nu.copy()
        y[1:] += spec.theta2 * x[:-1]
    return x[spec.burnin:], y[spec.burnin:]


def simulate_ar1_pair(spec: Ar1PairSpec, seed) -> BivariatePair:
    x, y = _ar1_arrays(spec, _rng(seed))
    return BivariatePair.from_arrays(x, y)


def arfima_ma_coefficients(d: float, n_max: int) -> np.ndarray:
    """MA(inf) weights ``Gamma(n+d) / (Gamma(n+1) Gamma(d))`` for n = 0..n_max.

    Built by the ratio recursion ``a_n = a_{n-1} (n-1+d) / n``, which avoids
    overflow in the Gamma functions.
    """
    _check_d(d)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    n = np.arange(1, n_max + 1, dtype=float)
    return np.concatenate([[1.0], np.cumprod((n - 1.0 + d) / n)])


def _arfima_arrays(spec: ArfimaPairSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    eps, nu = _innovations(rng, spec.T + spec.trunc, spec.rho)
    a1 = arfima_ma_coefficients(spec.d1, spec.trunc)
    a2 = a1 if spec.d2 == spec.d1 else arfima_ma_coefficients(spec.d2, spec.trunc)
    x = fftconvolve(eps, a1, mode="valid")
    y = fftconvolve(nu, a2, mode="valid")
    return x, y


def arfima_autocovariance(d: float, max_lag: int) -> np.ndarray:
    """Autocovariance of unit-innovation ARFIMA(0,d,0) at lags 0..max_lag."""
    _check_d(d)
    g0 = np.exp(gammaln(1.0 - 2.0 * d) - 2.0 * gammaln(1.0 - d))
    k = np.arange(1, max_lag + 1, dtype=float)
    return np.concatenate([[g0], g0 * np.cumprod((k - 1.0 + d) / (k - d))])


def _circulant_arrays(spec: ArfimaPairSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    T = spec.T
    g = arfima_autocovariance(spec.d1, T)
    lam = np.fft.fft(np.concatenate([g, g[-2:0:-1]])).real
    if lam.min() < -1e-8 * lam.max():
        raise ValueError("circulant embedding is not nonnegative definite")
    amp = np.sqrt(np.maximum(lam, 0.0) / len(lam))
    n = len(lam)
    w_eps = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    w_eta = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    w_nu = spec.rho * w_eps + np.sqrt(1.0 - spec.rho ** 2) * w_eta
    x = np.fft.fft(amp * w_eps)[:T].real
    y = np.fft.fft(amp * w_nu)[:T].real
    return x, y


def simulate_arfima_pair(spec: ArfimaPairSpec, seed) -> BivariatePair:
    gen = _circulant_arrays if spec.method == "circulant" else _arfima_arrays
    x, y = gen(spec, _rng(seed))
    return BivariatePair.from_arrays(x, y)


@dataclass(frozen=True)
class NoiseSpec:
    rho: float
    T: int

    def __post_init__(self):
        _check_rho(self.rho)

    @property
    def hurst(self) -> tuple[float, float]:
        return 0.5, 0.5


def simulate_batch(spec, seeds: Iterable[int]) -> tuple[np.ndarray, np.ndarray]:
    """Stack one simulated pair per seed into two ``(R, T)`` arrays."""
    xs, ys = [], []
    for seed in seeds:
        rng = _rng(seed)
        if isinstance(spec, NoiseSpec):
            x, y = _innovations(rng, spec.T, spec.rho)
        elif isinstance(spec, Ar1PairSpec):
            x, y = _ar1_arrays(spec, rng)
        elif isinstance(spec, ArfimaPairSpec) and spec.method == "circulant":
            x, y = _circulant_arrays(spec, rng)
        elif isinstance(spec, ArfimaPairSpec):
            x, y = _arfima_arrays(spec, rng)
        else:
            raise TypeError(f"unsupported process spec {type(spec).__name__}")
        xs.append(x)
        ys.append(y)
    return np.array(xs), np.array(ys)


def simulate(spec, seed) -> BivariatePair:
    x, y = simulate_batch(spec, [seed])
    return BivariatePair.from_arrays(x[0], y[0])
