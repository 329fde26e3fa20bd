"""Difference/Fourier-domain machinery for the folding-count estimation problem.

Folding a heavily oversampled signal leaves a fingerprint that is easiest to
isolate after two steps: a first-order difference (which shrinks the folding
counts onto a small Gaussian-integer lattice) and a unitary DFT (which pushes
the signal content into the lowest bins).  On a guard band of high bins the
signal contribution is provably small, so the selected DFT rows constrain
only the folding-count differences.  This module builds that banded integer
least-squares instance.

Index conventions: a length-``N`` signal has an ``N-1`` point difference
domain.  DFT bins are 0-based throughout (bin ``m`` has frequency
``2*pi*m/(N-1)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "SubsetSelection",
    "QuadraticInstance",
    "first_difference",
    "anti_difference",
    "dft",
    "beta_limits",
    "select_subset",
    "select_subset_tail",
    "build_instance",
    "exact_objective",
]


def first_difference(v: np.ndarray) -> np.ndarray:
    """Forward difference ``out[t] = v[t+1] - v[t]``; length shrinks by one."""
    v = np.asarray(v)
    if v.size < 2:
        raise ValueError("need at least two samples")
    return np.diff(v)


def anti_difference(d: np.ndarray) -> np.ndarray:
    """Cumulative-sum inverse of :func:`first_difference`, anchored at zero.

    ``anti_difference(first_difference(v)) == v - v[0]``; the inverse is
    defined only up to that additive constant.
    """
    d = np.asarray(d)
    out = np.zeros(d.size + 1, dtype=complex if np.iscomplexobj(d) else float)
    np.cumsum(d, out=out[1:])
    return out


def dft(v: np.ndarray) -> np.ndarray:
    """Unitary DFT: ``out[m] = sum_t v[t] exp(-2j*pi*m*t/L) / sqrt(L)``."""
    v = np.asarray(v)
    if v.size < 1:
        raise ValueError("empty input")
    return np.fft.fft(v) / np.sqrt(v.size)


def beta_limits(n: int, gamma: float) -> tuple[float, float]:
    """Open interval of admissible guard-band fractions ``beta``."""
    return 1.0 / (n - 1), (gamma - 1.0) / (2.0 * gamma)


@dataclass(frozen=True)
class SubsetSelection:
    """A contiguous block of difference-domain DFT bins (0-based indices).

    The block starts just above the signal band plus a ``beta`` fraction of
    guard bins and stops the same fraction short of the top, so both the
    signal's spectral leakage and its wrap-around image are excluded.
    """

    n: int
    gamma: float
    beta: float
    bins: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.bins.size


def select_subset(n: int, gamma: float, beta: float) -> SubsetSelection:
    """Pick the guard-band bins for a length-``n`` record.

    With ``L = n - 1`` and ``Nb = L*beta``, the selected 0-based bins are
    ``floor(L/gamma + Nb) + 1 .. floor(L - Nb)`` inclusive.  ``beta`` must
    lie strictly inside :func:`beta_limits`.
    """
    lo_beta, hi_beta = beta_limits(n, gamma)
    if not lo_beta < beta < hi_beta:
        raise ValueError(
            f"beta={beta} outside admissible interval ({lo_beta:.6g}, {hi_beta:.6g})"
        )
    big_l = n - 1
    nb = big_l * beta
    lo = int(np.floor(big_l / gamma + nb)) + 1
    hi = int(np.floor(big_l - nb))
    if hi < lo:
        raise ValueError("empty subset; beta too large for this n and gamma")
    return SubsetSelection(n=n, gamma=gamma, beta=beta,
                           bins=np.arange(lo, hi + 1))


def select_subset_tail(n: int, gamma: float) -> SubsetSelection:
    """Variant used by greedy-only recovery: every bin above the signal band."""
    big_l = n - 1
    lo = int(np.floor(big_l / gamma)) + 1
    if lo >= big_l:
        raise ValueError("no guard band; increase n or gamma")
    return SubsetSelection(n=n, gamma=gamma, beta=0.0,
                           bins=np.arange(lo, big_l))


@dataclass(frozen=True)
class QuadraticInstance:
    """Banded integer least-squares instance ``min |z_s + F_s eps|^2``.

    ``F_s`` is the unitary DFT restricted to the selected rows, ``z_s`` the
    scaled guard-band observations, and ``eps`` ranges over Gaussian-integer
    sequences of length ``n_vars``.  The Gram matrix ``Q = F_s^H F_s`` is
    Hermitian Toeplitz, so it is stored as the offset vector
    ``band[d] = Q[i, i+d]`` for ``d = 0..p``; dense copies are materialized
    on demand only (tests, diagnostics).
    """

    subset: SubsetSelection
    z_s: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    band: np.ndarray = field(repr=False)
    p: int
    v_bound: int

    @property
    def n_vars(self) -> int:
        return self.subset.n - 1

    def forward(self, eps: np.ndarray) -> np.ndarray:
        """Apply ``F_s`` via FFT: unitary DFT followed by row selection."""
        return dft(eps)[self.subset.bins]

    def adjoint(self, u: np.ndarray) -> np.ndarray:
        """Apply ``F_s^H`` via inverse FFT of the zero-embedded coefficients."""
        full = np.zeros(self.n_vars, dtype=complex)
        full[self.subset.bins] = u
        return np.fft.ifft(full) * np.sqrt(self.n_vars)

    def column(self, j: int) -> np.ndarray:
        """Explicit ``j``-th column of ``F_s`` (all columns share one norm)."""
        return np.exp(-2j * np.pi * self.subset.bins * j / self.n_vars) \
            / np.sqrt(self.n_vars)

    def dense_matrix(self) -> np.ndarray:
        """Dense ``F_s`` (|S| x n_vars); test-scale use only."""
        m = self.n_vars
        return np.exp(-2j * np.pi * np.outer(self.subset.bins, np.arange(m)) / m) \
            / np.sqrt(m)

    def toeplitz_offsets(self, max_offset: int | None = None) -> np.ndarray:
        """Gram offsets ``q[d] = Q[i, i+d]`` from the closed-form geometric sum."""
        m = self.n_vars
        if max_offset is None:
            max_offset = m - 1
        d = np.arange(max_offset + 1)
        return _gram_offsets(self.subset.bins, m, d)

    def q_dense(self) -> np.ndarray:
        """Dense Hermitian Toeplitz ``Q``; test-scale use only."""
        q = self.toeplitz_offsets()
        m = self.n_vars
        idx = np.subtract.outer(np.arange(m), np.arange(m))
        out = q[np.abs(idx)]
        return np.where(idx > 0, np.conj(out), out)

    def q_banded_dense(self) -> np.ndarray:
        """Dense band-truncated ``Q`` (entries beyond offset ``p`` zeroed)."""
        m = self.n_vars
        idx = np.subtract.outer(np.arange(m), np.arange(m))
        out = self.q_dense()
        return np.where(np.abs(idx) <= self.p, out, 0.0)

    def with_observation(self, z_s: np.ndarray) -> "QuadraticInstance":
        """Same geometry, new observation vector (and matching linear term)."""
        return replace(self, z_s=z_s, b=self.adjoint(z_s))


def _gram_offsets(bins: np.ndarray, m: int, d: np.ndarray) -> np.ndarray:
    """``(1/m) * sum_{s in bins} exp(-2j*pi*s*d/m)`` per offset ``d``.

    For the contiguous bin blocks used here the sum collapses to a geometric
    series, evaluated in closed form to keep instance construction ``O(p)``.
    """
    lo, hi = int(bins[0]), int(bins[-1])
    contiguous = bins.size == hi - lo + 1
    out = np.empty(d.size, dtype=complex)
    for i, dd in enumerate(d):
        r = np.exp(-2j * np.pi * dd / m)
        if dd % m == 0:
            out[i] = bins.size / m
        elif contiguous:
            out[i] = r ** lo * (1.0 - r ** bins.size) / (1.0 - r) / m
        else:
            out[i] = np.sum(r ** bins) / m
    return out


def build_instance(y: np.ndarray, lam: float, subset: SubsetSelection,
                   p: int, v_bound: int) -> QuadraticInstance:
    """Assemble the guard-band instance from modulo samples.

    ``z_s`` is the selected unitary DFT of the first difference of ``y``
    divided by ``2*lam``; ``b = F_s^H z_s``; the Gram band holds offsets
    ``0..p`` of ``Q = F_s^H F_s``.
    """
    y = np.asarray(y, dtype=complex)
    if y.size != subset.n:
        raise ValueError(f"signal length {y.size} does not match subset n={subset.n}")
    if p < 1:
        raise ValueError("band order p must be >= 1")
    if v_bound < 1:
        raise ValueError("state bound must be >= 1")
    m = y.size - 1
    z_s = dft(first_difference(y))[subset.bins] / (2.0 * lam)
    band = _gram_offsets(subset.bins, m, np.arange(p + 1))
    full = np.zeros(m, dtype=complex)
    full[subset.bins] = z_s
    b = np.fft.ifft(full) * np.sqrt(m)
    return QuadraticInstance(subset=subset, z_s=z_s, b=b, band=band,
                             p=p, v_bound=v_bound)


def exact_objective(inst: QuadraticInstance, eps: np.ndarray) -> float:
    """Un-approximated objective ``|z_s + F_s eps|^2``."""
    return float(np.linalg.norm(inst.z_s + inst.forward(eps)) ** 2)
