import numpy as np
import pytest

from modlse import (
    SubsetSelection,
    accept_if_improves,
    build_instance,
    exact_objective,
    omp_refine,
)


def planted_instance(rng, n=64, subset_size=45, noise=1e-3):
    """Instance whose exact minimizer is a known small lattice vector."""
    m = n - 1
    bins = np.sort(rng.choice(np.arange(m), size=subset_size, replace=False))
    subset = SubsetSelection(n=n, gamma=8.0, beta=0.0, bins=bins)
    y = rng.normal(size=n) + 1j * rng.normal(size=n)
    inst = build_instance(y, 0.5, subset, 2, 1)
    eps_true = (rng.integers(-1, 2, m) + 1j * rng.integers(-1, 2, m)).astype(complex)
    z = -inst.forward(eps_true)
    z = z + noise * (rng.normal(size=subset_size) + 1j * rng.normal(size=subset_size))
    return inst.with_observation(z), eps_true


class TestOmpRefine:
    def test_no_improving_atom_returns_zero(self):
        rng = np.random.default_rng(70)
        inst, eps_true = planted_instance(rng)
        delta = omp_refine(inst, eps_true)
        np.testing.assert_array_equal(delta, np.zeros(inst.n_vars, dtype=complex))

    def test_recovers_planted_single_error(self):
        rng = np.random.default_rng(71)
        hits = 0
        for _ in range(200):
            inst, eps_true = planted_instance(rng)
            wrong = eps_true.copy()
            pos = int(rng.integers(0, inst.n_vars))
            wrong[pos] += 1.0
            delta = omp_refine(inst, wrong)
            hits += int(np.array_equal(wrong + delta, eps_true))
        assert hits >= 190

    def test_recovers_planted_double_error(self):
        rng = np.random.default_rng(72)
        hits = 0
        for _ in range(200):
            inst, eps_true = planted_instance(rng)
            wrong = eps_true.copy()
            pos = rng.choice(inst.n_vars, size=2, replace=False)
            wrong[pos[0]] += 1.0
            wrong[pos[1]] -= 1.0 + 1.0j
            delta = omp_refine(inst, wrong)
            hits += int(np.array_equal(wrong + delta, eps_true))
        assert hits >= 190

    def test_never_increases_objective(self):
        rng = np.random.default_rng(73)
        for _ in range(50):
            inst, eps_true = planted_instance(rng, noise=0.3)
            start = (rng.integers(-1, 2, inst.n_vars)
                     + 1j * rng.integers(-1, 2, inst.n_vars)).astype(complex)
            delta = omp_refine(inst, start)
            assert exact_objective(inst, start + delta) <= \
                exact_objective(inst, start) + 1e-12

    def test_output_stays_on_lattice_and_may_leave_state_bound(self):
        rng = np.random.default_rng(74)
        inst, eps_true = planted_instance(rng)
        # plant an error of magnitude 3: the correction must go beyond |1|
        wrong = eps_true.copy()
        wrong[5] += 3.0
        delta = omp_refine(inst, wrong)
        assert np.all(delta.real == np.round(delta.real))
        assert np.all(delta.imag == np.round(delta.imag))
        assert np.array_equal(wrong + delta, eps_true)
        assert np.max(np.abs(delta.real)) == 3.0

    def test_sparsity_cap_respected(self):
        rng = np.random.default_rng(75)
        inst, eps_true = planted_instance(rng, noise=0.5)
        delta = omp_refine(inst, np.zeros(inst.n_vars, dtype=complex),
                           max_sparsity=3)
        assert np.count_nonzero(delta) <= 3

    def test_rejects_length_mismatch(self):
        rng = np.random.default_rng(76)
        inst, _ = planted_instance(rng)
        with pytest.raises(ValueError):
            omp_refine(inst, np.zeros(3, dtype=complex))


class TestAcceptIfImproves:
    def test_zero_delta_unchanged(self):
        rng = np.random.default_rng(77)
        inst, eps_true = planted_instance(rng)
        zero = np.zeros(inst.n_vars, dtype=complex)
        out = accept_if_improves(inst, eps_true, zero)
        np.testing.assert_array_equal(out, eps_true)

    def test_improving_delta_accepted(self):
        rng = np.random.default_rng(78)
        inst, eps_true = planted_instance(rng)
        wrong = eps_true.copy()
        wrong[3] += 1.0
        fix = np.zeros(inst.n_vars, dtype=complex)
        fix[3] = -1.0
        out = accept_if_improves(inst, wrong, fix)
        np.testing.assert_array_equal(out, eps_true)

    def test_worsening_delta_rejected(self):
        rng = np.random.default_rng(79)
        inst, eps_true = planted_instance(rng)
        bad = np.zeros(inst.n_vars, dtype=complex)
        bad[0] = 5.0
        out = accept_if_improves(inst, eps_true, bad)
        np.testing.assert_array_equal(out, eps_true)
