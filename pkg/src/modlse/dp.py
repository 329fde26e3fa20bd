"""Exact dynamic-programming minimizer for the band-truncated lattice problem.

Truncating the Gram matrix to half-bandwidth ``p`` couples each unknown only
to its ``p`` neighbours, so the objective splits into a chain of stage terms
and admits an exact forward/backward sweep over the finite state alphabet
``{a + jb : |a|, |b| <= V}``.  The sweep returns a global minimizer of the
*banded* objective; the companion brute-force enumerator exists to certify
that on test-scale instances.

State tuples are flattened to radix-``B`` integers (``B = (2V+1)^2``) with
the leading variable most significant, and ties are broken by the smallest
flat index, i.e. lexicographically by (real part, imaginary part) per
variable.  Only two stage value tables are ever alive at once; the per-stage
argmin tables needed by the backward pass are kept in the smallest integer
dtype that can hold a state index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .transform import QuadraticInstance

__all__ = [
    "DpStats",
    "StageDecomposition",
    "state_alphabet",
    "decompose_objective",
    "banded_objective",
    "dp_solve",
    "brute_force_solve",
]

DEFAULT_BUDGET = 10 ** 8
"""Fail-fast ceiling on per-stage enumeration size (table entries)."""


def state_alphabet(v_bound: int) -> np.ndarray:
    """All Gaussian integers with ``|re|, |im| <= v_bound``, in tie-break order
    (real part ascending, then imaginary part ascending)."""
    r = np.arange(-v_bound, v_bound + 1)
    re, im = np.meshgrid(r, r, indexing="ij")
    return (re + 1j * im).ravel()


@dataclass(frozen=True)
class DpStats:
    """Work counters for one solve, used by complexity regression tests."""

    n_stages: int
    state_count: int
    candidates_evaluated: int
    value_table_entries: int


@dataclass(frozen=True)
class StageDecomposition:
    """Chain decomposition of ``eps^H Q_banded eps + 2 Re{b^H eps}``.

    Stage ``k`` (0-based, ``k < num_stages - 1``) owns the diagonal entry of
    variable ``k``, its couplings to the next ``p`` variables, and its linear
    term; the final stage owns the full trailing ``(p+1)``-variable block.
    Every stage is a function of the window ``eps[k : k+p+1]``.
    """

    band: np.ndarray
    b: np.ndarray
    p: int

    @property
    def num_stages(self) -> int:
        return self.b.size - self.p

    def stage_value(self, k: int, window: np.ndarray) -> float:
        """Evaluate stage ``k`` on ``window = eps[k : k+p+1]``."""
        p = self.p
        if not 0 <= k < self.num_stages:
            raise IndexError("stage index out of range")
        if window.size != p + 1:
            raise ValueError("window must hold p+1 values")
        if k < self.num_stages - 1:
            coupled = np.dot(self.band[1:], window[1:])
            return float(np.real(
                np.conj(window[0]) * (self.band[0] * window[0]
                                      + 2.0 * coupled + 2.0 * self.b[k])
            ))
        block = _band_block(self.band, p + 1)
        lin = self.b[k:k + p + 1]
        return float(np.real(np.conj(window) @ block @ window)
                     + 2.0 * float(np.real(np.conj(lin) @ window)))

    def total(self, eps: np.ndarray) -> float:
        """Sum of all stage terms; equals the banded objective."""
        return sum(self.stage_value(k, eps[k:k + self.p + 1])
                   for k in range(self.num_stages))


def _band_block(band: np.ndarray, size: int) -> np.ndarray:
    """Dense Hermitian Toeplitz block from offsets ``band[0..p]``."""
    idx = np.subtract.outer(np.arange(size), np.arange(size))
    padded = np.zeros(size, dtype=complex)
    padded[:band.size] = band
    out = padded[np.minimum(np.abs(idx), size - 1)]
    out = np.where(np.abs(idx) >= band.size, 0.0, out)
    return np.where(idx > 0, np.conj(out), out)


def decompose_objective(inst: QuadraticInstance) -> StageDecomposition:
    """Split the banded objective of ``inst`` into its stage chain."""
    if inst.p < 1:
        raise ValueError("band order must be >= 1")
    if inst.n_vars <= inst.p + 1:
        raise ValueError("instance too short for this band order")
    return StageDecomposition(band=inst.band, b=inst.b, p=inst.p)


def banded_objective(inst: QuadraticInstance, eps: np.ndarray) -> float:
    """``eps^H Q_banded eps + 2 Re{b^H eps}`` without forming dense ``Q``."""
    eps = np.asarray(eps, dtype=complex)
    band = inst.band
    acc = float(band[0].real * np.sum(np.abs(eps) ** 2))
    for d in range(1, inst.p + 1):
        acc += 2.0 * float(np.real(band[d] * np.sum(np.conj(eps[:-d]) * eps[d:])))
    return acc + 2.0 * float(np.real(np.conj(inst.b) @ eps))


def _check_budget(entries: int, budget: int) -> None:
    if entries > budget:
        raise ValueError(
            f"state-space enumeration of {entries} entries exceeds budget {budget}; "
            "reduce p or the state bound, or raise the budget explicitly"
        )


def dp_solve(inst: QuadraticInstance, *, budget: int = DEFAULT_BUDGET,
             b: np.ndarray | None = None,
             return_stats: bool = False):
    """Globally minimize the band-truncated objective over bounded states.

    Runs the forward value recursion over stage tables keyed by ``p``-tuples
    of states, enumerates the trailing ``(p+1)``-variable block exactly, and
    backtracks through the recorded argmins.  ``b`` overrides the linear
    term of ``inst`` (used by iterative re-centering); the Gram band is
    always taken from the instance.

    Returns the minimizing Gaussian-integer sequence (``complex128`` with
    integral parts), plus a :class:`DpStats` when ``return_stats`` is set.
    """
    p, v = inst.p, inst.v_bound
    m = inst.n_vars
    if b is None:
        b = inst.b
    elif np.asarray(b).size != m:
        raise ValueError("linear-term override must have one entry per variable")
    if m <= p + 1:
        raise ValueError("instance too short for this band order")
    states = state_alphabet(v)
    bsz = states.size
    _check_budget(bsz ** (p + 1), budget)

    n_stages = m - p
    band = inst.band
    q0 = float(band[0].real)

    # Per-key digit tables: digit t of key is the state index of variable
    # k+1+t relative to stage k (leading digit most significant).
    keys = np.arange(bsz ** p)
    coupled = np.zeros(bsz ** p, dtype=complex)
    for t in range(p):
        digit = (keys // bsz ** (p - 1 - t)) % bsz
        coupled += band[t + 1] * states[digit]
    cross = 2.0 * np.real(np.conj(states)[:, None] * coupled[None, :])
    prev_key = np.arange(bsz)[:, None] * bsz ** (p - 1) + keys[None, :] // bsz
    base_quad = q0 * np.abs(states) ** 2

    value = np.zeros(bsz ** p)
    rc_dtype = np.min_scalar_type(bsz - 1)
    argmins = np.empty((n_stages - 1, bsz ** p), dtype=rc_dtype)
    evaluated = 0
    for k in range(n_stages - 1):
        stage = value[prev_key] + cross \
            + (base_quad + 2.0 * np.real(np.conj(states) * b[k]))[:, None]
        argmins[k] = np.argmin(stage, axis=0)
        value = np.take_along_axis(stage, argmins[k][None, :].astype(np.intp),
                                   axis=0)[0]
        evaluated += stage.size

    # Trailing block: enumerate all (p+1)-tuples, axis i = variable
    # n_stages-1+i, leading axis most significant.
    tail = np.zeros((bsz,) * (p + 1))
    for i in range(p + 1):
        shape = [1] * (p + 1)
        shape[i] = bsz
        tail = tail + (base_quad + 2.0 * np.real(
            np.conj(states) * b[n_stages - 1 + i])).reshape(shape)
    for i in range(p + 1):
        for j in range(i + 1, p + 1):
            pair = 2.0 * np.real(np.conj(states)[:, None]
                                 * (band[j - i] * states)[None, :])
            shape = [1] * (p + 1)
            shape[i], shape[j] = bsz, bsz
            tail = tail + pair.reshape(shape)
    tail = tail.reshape(-1)
    total = value[np.arange(bsz ** (p + 1)) // bsz] + tail
    evaluated += total.size
    best = int(np.argmin(total))

    eps = np.zeros(m, dtype=complex)
    rem = best
    for i in range(p + 1):
        digit, rem = divmod(rem, bsz ** (p - i))
        eps[n_stages - 1 + i] = states[digit]
    key = best // bsz
    for k in range(n_stages - 2, -1, -1):
        s = int(argmins[k][key])
        eps[k] = states[s]
        key = s * bsz ** (p - 1) + key // bsz

    if return_stats:
        stats = DpStats(n_stages=n_stages, state_count=bsz,
                        candidates_evaluated=evaluated,
                        value_table_entries=bsz ** p)
        return eps, stats
    return eps


def brute_force_solve(inst: QuadraticInstance, use_banded: bool = True,
                      *, budget: int = DEFAULT_BUDGET,
                      b: np.ndarray | None = None) -> np.ndarray:
    """Exhaustively minimize the exact or banded objective (test-scale only).

    Enumerates the full ``(2V+1)^(2*n_vars)`` candidate set by splitting the
    variables into two halves and combining the halves' quadratic forms with
    a single cross matrix, so no candidate matrix is ever materialized.
    Ties resolve to the smallest flat candidate index (leading variable most
    significant, states in :func:`state_alphabet` order).
    """
    m = inst.n_vars
    v = inst.v_bound
    states = state_alphabet(v)
    bsz = states.size
    _check_budget(bsz ** m, budget)
    if b is None:
        b = inst.b

    q = inst.q_banded_dense() if use_banded else inst.q_dense()

    def half_tuples(count: int) -> np.ndarray:
        idx = np.arange(bsz ** count)
        cols = [(idx // bsz ** (count - 1 - t)) % bsz for t in range(count)]
        return states[np.stack(cols, axis=1)]

    h1 = m // 2
    left = half_tuples(h1)
    right = half_tuples(m - h1)
    q11, q22, q12 = q[:h1, :h1], q[h1:, h1:], q[:h1, h1:]
    quad_l = np.real(np.einsum("ci,ij,cj->c", np.conj(left), q11, left)) \
        + 2.0 * np.real(np.conj(left) @ b[:h1])
    quad_r = np.real(np.einsum("ci,ij,cj->c", np.conj(right), q22, right)) \
        + 2.0 * np.real(np.conj(right) @ b[h1:])
    cross = 2.0 * np.real(np.conj(left) @ q12 @ right.T)
    total = quad_l[:, None] + cross + quad_r[None, :]
    flat = int(np.argmin(total))
    li, ri = divmod(flat, right.shape[0])
    return np.concatenate([left[li], right[ri]])
