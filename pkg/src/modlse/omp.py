"""Greedy lattice refinement of a folding-count estimate.

When the banded solve is nearly right, the remaining error is a sparse
Gaussian-integer vector, so it can be chased greedily: pick the dictionary
column most correlated with the current residual, least-squares fit the
selected support, round the fit back onto the lattice, and keep the update
only while the true (un-truncated) objective keeps dropping.  Columns of the
selected-row DFT all share one norm, so raw inner products rank correlations
correctly.
"""

from __future__ import annotations

import numpy as np

from .transform import QuadraticInstance, exact_objective

__all__ = ["omp_refine", "accept_if_improves"]


def omp_refine(inst: QuadraticInstance, eps_hat: np.ndarray,
               max_sparsity: int | None = None) -> np.ndarray:
    """Greedy integer correction ``delta`` reducing ``|z_s + F_s (eps_hat+delta)|^2``.

    Support coefficients are re-fit and re-rounded after every selection, and
    the internal residual always reflects the rounded values.  Stops after
    ``max_sparsity`` selections (default ``ceil(|S|/4)``) or as soon as a
    rounded update fails to decrease the objective.  Returns the
    all-zero vector when no improving atom exists.
    """
    eps_hat = np.asarray(eps_hat, dtype=complex)
    if eps_hat.size != inst.n_vars:
        raise ValueError("estimate length does not match instance")
    if max_sparsity is None:
        max_sparsity = int(np.ceil(inst.subset.size / 4))

    base = inst.z_s + inst.forward(eps_hat)
    best_obj = float(np.linalg.norm(base) ** 2)
    best_delta = np.zeros(inst.n_vars, dtype=complex)
    residual = base
    support: list[int] = []
    columns = np.zeros((inst.subset.size, 0), dtype=complex)

    for _ in range(max_sparsity):
        corr = np.abs(inst.adjoint(residual))
        if support:
            corr[support] = -1.0
        j = int(np.argmax(corr))
        if corr[j] <= 0.0:
            break
        support.append(j)
        columns = np.hstack([columns, inst.column(j)[:, None]])
        fit, *_ = np.linalg.lstsq(columns, -base, rcond=None)
        rounded = np.round(fit.real) + 1j * np.round(fit.imag)
        candidate_resid = base + columns @ rounded
        obj = float(np.linalg.norm(candidate_resid) ** 2)
        if obj < best_obj:
            best_obj = obj
            best_delta = np.zeros(inst.n_vars, dtype=complex)
            best_delta[support] = rounded
            residual = candidate_resid
        else:
            break
    return best_delta


def accept_if_improves(inst: QuadraticInstance, eps_hat: np.ndarray,
                       delta: np.ndarray) -> np.ndarray:
    """Return ``eps_hat + delta`` only if it strictly lowers the exact objective."""
    eps_hat = np.asarray(eps_hat, dtype=complex)
    delta = np.asarray(delta, dtype=complex)
    if eps_hat.shape != delta.shape:
        raise ValueError("length mismatch")
    if exact_objective(inst, eps_hat + delta) < exact_objective(inst, eps_hat):
        return eps_hat + delta
    return eps_hat
