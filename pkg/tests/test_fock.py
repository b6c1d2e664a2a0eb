"""Operator algebra on the dense Fock representation."""
import numpy as np
import pytest

from mzmwitness.fock import (FockSpace, dephase_modes, expectation,
                             is_hermitian, parity_op, partial_trace,
                             validate_density_matrix)
from conftest import random_density


def anticommutator(a, b):
    return a @ b + b @ a


def test_annihilation_smallest_space():
    c = FockSpace(1).annihilation(0)
    # single nonzero entry taking |1> to |0>
    expected = np.array([[0, 1], [0, 0]], dtype=complex)
    assert np.array_equal(c, expected)


def test_annihilation_mode_out_of_range():
    space = FockSpace(2)
    with pytest.raises(IndexError):
        space.annihilation(2)
    with pytest.raises(IndexError):
        space.annihilation(-1)


def test_invalid_space():
    with pytest.raises(ValueError):
        FockSpace(0)


def test_cc_anticommutes():
    space = FockSpace(2)
    c0, c1 = space.annihilation(0), space.annihilation(1)
    assert np.abs(anticommutator(c0, c1)).max() == 0.0


def test_all_canonical_anticommutation_relations():
    space = FockSpace(3)
    cs = [space.annihilation(m) for m in range(3)]
    eye = np.eye(space.dim)
    for i, ci in enumerate(cs):
        for j, cj in enumerate(cs):
            delta = 1.0 if i == j else 0.0
            assert np.abs(anticommutator(ci, cj.conj().T) - delta * eye).max() < 1e-12
            assert np.abs(anticommutator(ci, cj)).max() < 1e-12


def test_majorana_single_mode_explicit():
    g1, g2 = FockSpace(1).majorana_ops()
    c = FockSpace(1).annihilation(0)
    assert np.abs(g1 - (c + c.conj().T)).max() == 0.0
    assert np.abs(g2 - (-1j) * (c.conj().T - c)).max() == 0.0
    eye = np.eye(2)
    assert np.abs(g1 @ g1 - eye).max() < 1e-15
    assert np.abs(g2 @ g2 - eye).max() < 1e-15


def test_majorana_clifford_algebra():
    space = FockSpace(3)
    gammas = space.majorana_ops()
    assert len(gammas) == 6
    eye = np.eye(space.dim)
    for a, ga in enumerate(gammas):
        assert is_hermitian(ga)
        for b, gb in enumerate(gammas):
            delta = 2.0 if a == b else 0.0
            assert np.abs(anticommutator(ga, gb) - delta * eye).max() < 1e-12


def test_pair_parity_spectrum():
    gammas = FockSpace(3).majorana_ops()
    p = parity_op(gammas[0], gammas[1])
    assert is_hermitian(p)
    w = np.linalg.eigvalsh(p)
    assert np.abs(np.sort(np.abs(w)) - 1.0).max() < 1e-10
    assert np.abs(p @ p - np.eye(8)).max() < 1e-12


def test_pair_parity_single_mode_signs():
    space = FockSpace(1)
    g1, g2 = space.majorana_ops()
    p = parity_op(g1, g2)
    empty = space.basis_state([0])
    occupied = space.basis_state([1])
    assert abs(empty.conj() @ p @ empty - 1.0) < 1e-14
    assert abs(occupied.conj() @ p @ occupied + 1.0) < 1e-14


def test_pair_parity_antisymmetry():
    gammas = FockSpace(3).majorana_ops()
    p_ab = parity_op(gammas[2], gammas[5])
    p_ba = parity_op(gammas[5], gammas[2])
    assert np.abs(p_ab + p_ba).max() < 1e-14


def test_pair_parity_product_is_total_parity():
    space = FockSpace(3)
    g = space.majorana_ops()
    product = (parity_op(g[0], g[1]) @ parity_op(g[2], g[3])
               @ parity_op(g[4], g[5]))
    assert np.abs(product - space.total_parity()).max() < 1e-12


def test_total_parity_commutes_with_every_pair_parity():
    space = FockSpace(3)
    g = space.majorana_ops()
    p_tot = space.total_parity()
    for a in range(6):
        for b in range(a + 1, 6):
            p = parity_op(g[a], g[b])
            assert np.abs(p_tot @ p - p @ p_tot).max() < 1e-12


def test_pair_parity_dimension_mismatch():
    with pytest.raises(ValueError):
        parity_op(FockSpace(1).majorana_ops()[0], FockSpace(2).majorana_ops()[0])
    g = FockSpace(1).majorana_ops()[0]
    with pytest.raises(ValueError):
        parity_op(g, g)


def test_expectation_identity_and_eigenstate():
    space = FockSpace(3)
    rho = np.zeros((8, 8), dtype=complex)
    rho[0b011, 0b011] = 1.0  # modes 0 and 1 occupied
    assert abs(expectation(np.eye(8, dtype=complex), rho) - 1.0) < 1e-14
    g = space.majorana_ops()
    p01 = parity_op(g[0], g[1])  # mode 0 parity
    assert abs(expectation(p01, rho).real + 1.0) < 1e-14


def test_expectation_matches_eigenbasis_sum(rng):
    h = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    h = 0.5 * (h + h.conj().T)
    rho = random_density(rng, 8)
    w, v = np.linalg.eigh(h)
    oracle = sum(w[k] * (v[:, k].conj() @ rho @ v[:, k]).real for k in range(8))
    val = expectation(h, rho)
    assert abs(val.real - oracle) < 1e-10
    assert abs(val.imag) < 1e-10


def test_expectation_dimension_mismatch(rng):
    with pytest.raises(ValueError):
        expectation(np.eye(4), random_density(rng, 8))


def test_partial_trace_product_state(rng):
    rho_a = random_density(rng, 2)
    rho_b = random_density(rng, 4)
    # modes 1,2 slow, mode 0 fast
    full = np.kron(rho_b, rho_a)
    assert np.abs(partial_trace(full, [0], 3) - rho_a).max() < 1e-12
    assert np.abs(partial_trace(full, [1, 2], 3) - rho_b).max() < 1e-12


def test_partial_trace_maximally_entangled():
    psi = np.zeros(4, dtype=complex)
    psi[0b00] = 1 / np.sqrt(2)
    psi[0b11] = 1 / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    reduced = partial_trace(rho, [0], 2)
    assert np.abs(reduced - np.eye(2) / 2).max() < 1e-14


def test_partial_trace_direct_summation_oracle(rng):
    rho = random_density(rng, 8)
    reduced = partial_trace(rho, [0, 2], 3)
    # explicit index bookkeeping: sum the traced mode-1 bit
    oracle = np.zeros((4, 4), dtype=complex)
    for r in range(8):
        for c in range(8):
            if (r >> 1) & 1 != (c >> 1) & 1:
                continue
            rr = (r & 1) | (((r >> 2) & 1) << 1)
            cc = (c & 1) | (((c >> 2) & 1) << 1)
            oracle[rr, cc] += rho[r, c]
    assert np.abs(reduced - oracle).max() < 1e-14
    assert abs(np.trace(reduced) - 1.0) < 1e-12
    validate_density_matrix(reduced)


def test_partial_trace_rejects_bad_subsets(rng):
    rho = random_density(rng, 8)
    with pytest.raises(ValueError):
        partial_trace(rho, [], 3)
    with pytest.raises(ValueError):
        partial_trace(rho, [3], 3)


def test_dephase_modes_preserves_trace_and_diagonal(rng):
    rho = random_density(rng, 8)
    out = dephase_modes(rho, [0, 1], 3)
    assert abs(np.trace(out) - 1.0) < 1e-12
    assert np.abs(np.diag(out) - np.diag(rho)).max() < 1e-14
    validate_density_matrix(out)


def test_validate_density_matrix_rejects_bad_inputs():
    with pytest.raises(ValueError):
        validate_density_matrix(np.eye(4, dtype=complex))  # trace 4
    bad = np.diag([1.5, -0.5]).astype(complex)
    with pytest.raises(ValueError):
        validate_density_matrix(bad)
