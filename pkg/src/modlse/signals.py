"""Test-signal synthesis and the centered modulo (self-reset ADC) model.

A length-N complex signal is represented as a 1-D ``numpy`` array of
``complex128``.  Folding-count sequences ("simple functions") are Gaussian
integers stored as ``complex128`` with integer-valued real and imaginary
parts, so that ``g = y + 2*lam*eps`` holds exactly in double precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LineSpectrum",
    "SamplingConfig",
    "synth_line_spectral",
    "gen_random_spectrum",
    "gen_bandlimited",
    "add_noise",
    "centered_modulo",
    "modulo_sample",
    "residual_decompose",
]

NOISELESS = np.inf
"""SNR value (dB) that disables noise injection entirely."""


@dataclass(frozen=True)
class LineSpectrum:
    """A K-component line spectrum: frequencies in rad/sample plus complex weights."""

    omegas: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        omegas = np.atleast_1d(np.asarray(self.omegas, dtype=float))
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if omegas.size == 0:
            raise ValueError("spectrum must contain at least one component")
        if omegas.shape != coeffs.shape:
            raise ValueError("omegas and coeffs must have matching length")
        if omegas.size > 1 and np.min(np.abs(np.subtract.outer(omegas, omegas))
                                      + np.eye(omegas.size)) == 0.0:
            raise ValueError("frequencies must be pairwise distinct")
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return self.omegas.size


@dataclass(frozen=True)
class SamplingConfig:
    """Scene parameters for simulated modulo acquisition."""

    n: int = 512
    gamma: float = 10.0
    lam: float = 0.7
    k: int = 3
    snr_db: float = 30.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.gamma <= 1:
            raise ValueError("gamma must exceed 1")
        if self.lam <= 0:
            raise ValueError("lam must be positive")


def synth_line_spectral(spectrum: LineSpectrum, n: int) -> np.ndarray:
    """Evaluate ``x[t] = sum_k c_k exp(j w_k t)`` for ``t = 0..n-1``.

    Parameters
    ----------
    spectrum : LineSpectrum
        Frequencies and complex weights.
    n : int
        Number of samples, at least 2.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    t = np.arange(n)
    return np.exp(1j * np.outer(t, spectrum.omegas)) @ spectrum.coeffs


def gen_random_spectrum(k: int, gamma: float, rng: np.random.Generator,
                        min_separation: float | None = None) -> LineSpectrum:
    """Draw a random K-component spectrum confined to ``(0, 2*pi/gamma)``.

    Frequencies are i.i.d. uniform on the admissible band; weight magnitudes
    are Gaussian with mean 1 and variance 0.1 (redrawn while non-positive);
    phases are uniform on ``(0, 2*pi)``.  When ``min_separation`` is given,
    draws whose minimum pairwise frequency gap falls below it are rejected
    wholesale; simulation callers pass ``2*pi/n`` so that every scene is
    resolvable at its record length.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    hi = 2.0 * np.pi / gamma
    if min_separation is None:
        min_separation = 0.0
    while True:
        omegas = rng.uniform(0.0, hi, size=k)
        if np.all(omegas > 0.0) and (
            k == 1 or np.min(np.diff(np.sort(omegas))) >= min_separation
        ):
            break
    mags = rng.normal(1.0, np.sqrt(0.1), size=k)
    while np.any(mags <= 0.0):
        bad = mags <= 0.0
        mags[bad] = rng.normal(1.0, np.sqrt(0.1), size=int(bad.sum()))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=k)
    return LineSpectrum(omegas, mags * np.exp(1j * phases))


def gen_bandlimited(n: int, gamma: float, rng: np.random.Generator) -> np.ndarray:
    """Generate a complex signal whose spectrum occupies only low positive bins.

    A real bandlimited signal is drawn first (Hermitian-symmetric random DFT
    coefficients on bins ``|m| <= floor(n/gamma)``), its non-positive
    frequency half is then zeroed, and the result is transformed back.  The
    output is normalized to unit per-sample RMS and its DFT magnitude is
    supported on bins ``1..floor(n/gamma)`` only (clipped below the Nyquist
    bin when ``gamma <= 2``).
    """
    if n < 4:
        raise ValueError("n must be >= 4")
    b = int(np.floor(n / gamma))
    if b < 1:
        raise ValueError("band is empty; decrease gamma")
    spec = np.zeros(n, dtype=complex)
    coef = rng.normal(size=b) + 1j * rng.normal(size=b)
    spec[1:b + 1] = coef
    spec[n - b:] = np.conj(coef[::-1])
    spec[0] = rng.normal()
    real_bl = np.fft.ifft(spec) * np.sqrt(n)
    half = np.fft.fft(real_bl) / np.sqrt(n)
    half[0] = 0.0
    half[n // 2 + 1 if n % 2 == 0 else (n + 1) // 2:] = 0.0
    if n % 2 == 0:
        half[n // 2] = 0.0
    x = np.fft.ifft(half) * np.sqrt(n)
    rms = np.sqrt(np.mean(np.abs(x) ** 2))
    if rms == 0.0:
        raise ValueError("degenerate zero draw")
    return x / rms


def add_noise(x: np.ndarray, snr_db: float, rng: np.random.Generator) -> np.ndarray:
    """Add circular complex white Gaussian noise at the requested SNR.

    The per-sample noise variance is ``norm(x)^2 / (N * 10^(snr_db/10))``,
    split equally between real and imaginary parts.  ``snr_db = inf`` returns
    ``x`` unchanged (explicit noiseless mode).
    """
    x = np.asarray(x, dtype=complex)
    if np.isinf(snr_db):
        return x.copy()
    energy = float(np.linalg.norm(x) ** 2)
    if energy == 0.0:
        raise ValueError("cannot scale noise against a zero-energy signal")
    n = x.size
    var = energy / (n * 10.0 ** (snr_db / 10.0))
    sigma = np.sqrt(var / 2.0)
    w = rng.normal(0.0, sigma, size=n) + 1j * rng.normal(0.0, sigma, size=n)
    return x + w


def centered_modulo(t, lam: float):
    """Fold ``t`` into ``[-lam, lam)``: ``2*lam*(frac(t/(2*lam) + 1/2) - 1/2)``.

    Accepts scalars or arrays.  Evaluated as ``t - 2*lam*floor(t/(2*lam) + 1/2)``
    so that in-range inputs pass through bit-exactly.  The boundary
    ``t = lam`` maps to ``-lam`` (half-open interval, a consequence of the
    fractional-part definition).
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    t = np.asarray(t, dtype=float)
    out = t - 2.0 * lam * np.floor(t / (2.0 * lam) + 0.5)
    return out if out.ndim else float(out)


def modulo_sample(g: np.ndarray, lam: float) -> np.ndarray:
    """Apply the centered modulo to real and imaginary parts independently."""
    g = np.asarray(g, dtype=complex)
    return centered_modulo(g.real, lam) + 1j * centered_modulo(g.imag, lam)


def residual_decompose(g: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    """Recover the folding counts ``eps`` with ``g = y + 2*lam*eps`` exactly.

    Raises if ``(g - y) / (2*lam)`` is not integer-valued to within a scaled
    tolerance, which signals that ``y`` is not the modulo image of ``g``.
    """
    g = np.asarray(g, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if g.shape != y.shape:
        raise ValueError("g and y must have the same length")
    raw = (g - y) / (2.0 * lam)
    scale = max(1.0, float(np.max(np.abs(g))) / (2.0 * lam)) if g.size else 1.0
    tol = 1e-9 * scale
    re = np.round(raw.real)
    im = np.round(raw.imag)
    if np.max(np.abs(raw.real - re), initial=0.0) > tol or \
       np.max(np.abs(raw.imag - im), initial=0.0) > tol:
        raise ValueError("residual is not on the Gaussian-integer lattice; "
                         "inputs are inconsistent")
    return re + 1j * im
