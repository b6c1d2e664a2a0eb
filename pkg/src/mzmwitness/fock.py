"""Dense operator algebra on small fermionic Fock spaces.

Everything here is a plain complex numpy array on a 2^N dimensional space.
The basis is occupation bitstrings with mode 0 as the least significant bit,
and fermionic operators carry the usual Jordan-Wigner sign string over the
lower modes, so all anticommutation relations hold exactly.

Spaces stay tiny (at most 7 modes, dimension 128), so dense matrices are the
right tool; no sparsity machinery anywhere.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-10
POSITIVITY_ATOL = 1e-10


@dataclass(frozen=True)
class FockSpace:
    """Fermionic Fock space of ``n_modes`` modes, dimension ``2**n_modes``."""

    n_modes: int

    def __post_init__(self):
        if not isinstance(self.n_modes, int) or self.n_modes < 1:
            raise ValueError(f"n_modes must be a positive integer, got {self.n_modes!r}")

    @property
    def dim(self) -> int:
        return 1 << self.n_modes

    def annihilation(self, mode: int) -> np.ndarray:
        """c_mode with the Jordan-Wigner sign string over modes below it."""
        if not 0 <= mode < self.n_modes:
            raise IndexError(f"mode {mode} out of range for {self.n_modes} modes")
        return _annihilation(self.n_modes, mode).copy()

    def creation(self, mode: int) -> np.ndarray:
        return self.annihilation(mode).conj().T

    def number(self, mode: int) -> np.ndarray:
        c = self.annihilation(mode)
        return c.conj().T @ c

    def majorana_ops(self) -> list[np.ndarray]:
        """All 2N Majorana operators.

        Labels 2k-1 and 2k (1-based) attach to mode k-1:
        the odd-labelled operator is c + c^dag, the even-labelled one is
        -i(c^dag - c).  Each is Hermitian, squares to the identity, and the
        full set pairwise anticommutes.
        """
        return [g.copy() for g in _majoranas(self.n_modes)]

    def total_parity(self) -> np.ndarray:
        """(-1)^(total occupation), diagonal in the occupation basis."""
        occ = np.array([bin(b).count("1") for b in range(self.dim)])
        return np.diag((-1.0) ** occ).astype(complex)

    def basis_state(self, occupations) -> np.ndarray:
        """Unit vector |n_0 n_1 ... n_{N-1}> for the given occupation list."""
        occupations = list(occupations)
        if len(occupations) != self.n_modes or any(n not in (0, 1) for n in occupations):
            raise ValueError(f"need {self.n_modes} occupations in {{0,1}}")
        idx = sum(n << k for k, n in enumerate(occupations))
        vec = np.zeros(self.dim, dtype=complex)
        vec[idx] = 1.0
        return vec


@lru_cache(maxsize=None)
def _annihilation(n_modes: int, mode: int) -> np.ndarray:
    dim = 1 << n_modes
    c = np.zeros((dim, dim), dtype=complex)
    lower_mask = (1 << mode) - 1
    for b in range(dim):
        if (b >> mode) & 1:
            sign = -1.0 if bin(b & lower_mask).count("1") % 2 else 1.0
            c[b ^ (1 << mode), b] = sign
    c.setflags(write=False)
    return c


@lru_cache(maxsize=None)
def _majoranas(n_modes: int) -> tuple[np.ndarray, ...]:
    out = []
    for k in range(n_modes):
        c = _annihilation(n_modes, k)
        cd = c.conj().T
        g_odd = cd + c
        g_even = -1j * (cd - c)
        g_odd.setflags(write=False)
        g_even.setflags(write=False)
        out.extend([g_odd, g_even])
    return tuple(out)


def annihilation_op(space: FockSpace, mode: int) -> np.ndarray:
    return space.annihilation(mode)


def creation_op(space: FockSpace, mode: int) -> np.ndarray:
    return space.creation(mode)


def majorana_ops(space: FockSpace) -> list[np.ndarray]:
    return space.majorana_ops()


def parity_op(gamma_a: np.ndarray, gamma_b: np.ndarray) -> np.ndarray:
    """Pair parity i*gamma_a*gamma_b.

    Hermitian and involutory for distinct anticommuting Majoranas, with
    eigenvalues +1 (pair mode empty) and -1 (pair mode occupied).
    """
    if gamma_a.shape != gamma_b.shape:
        raise ValueError(f"operator shapes differ: {gamma_a.shape} vs {gamma_b.shape}")
    if np.allclose(gamma_a, gamma_b, atol=1e-14):
        raise ValueError("pair parity needs two distinct Majorana operators")
    return 1j * gamma_a @ gamma_b


def expectation(op: np.ndarray, rho: np.ndarray) -> complex:
    """Tr(op @ rho)."""
    if op.shape != rho.shape:
        raise ValueError(f"dimension mismatch: op {op.shape}, rho {rho.shape}")
    return complex(np.einsum("ij,ji->", op, rho))


def state_expectation(op: np.ndarray, psi: np.ndarray) -> complex:
    """<psi|op|psi> for a state vector."""
    if op.shape[1] != psi.shape[0]:
        raise ValueError(f"dimension mismatch: op {op.shape}, psi {psi.shape}")
    return complex(psi.conj() @ op @ psi)


def partial_trace(rho: np.ndarray, keep_modes, n_modes: int | None = None) -> np.ndarray:
    """Reduced density matrix on ``keep_modes``.

    Kept modes retain their relative order, the lowest kept mode becoming the
    least significant bit of the reduced space.
    """
    dim = rho.shape[0]
    if n_modes is None:
        n_modes = dim.bit_length() - 1
    if dim != (1 << n_modes) or rho.shape != (dim, dim):
        raise ValueError(f"rho shape {rho.shape} incompatible with {n_modes} modes")
    keep = sorted(set(keep_modes))
    if not keep:
        raise ValueError("keep_modes must be nonempty")
    if any(m < 0 or m >= n_modes for m in keep):
        raise ValueError(f"keep_modes {keep} outside 0..{n_modes - 1}")

    letters = string.ascii_lowercase
    row = list(letters[:n_modes])
    extra = iter(letters[n_modes:])
    col = []
    for ax in range(n_modes):
        mode = n_modes - 1 - ax
        col.append(next(extra) if mode in keep else row[ax])
    out_row = [row[ax] for ax in range(n_modes) if (n_modes - 1 - ax) in keep]
    out_col = [col[ax] for ax in range(n_modes) if (n_modes - 1 - ax) in keep]
    sub = "".join(row) + "".join(col) + "->" + "".join(out_row) + "".join(out_col)
    reduced = np.einsum(sub, rho.reshape([2] * (2 * n_modes)))
    d = 1 << len(keep)
    return np.ascontiguousarray(reduced.reshape(d, d))


def dephase_modes(rho: np.ndarray, modes, n_modes: int | None = None) -> np.ndarray:
    """Zero every coherence between basis states that differ on ``modes``.

    Equivalent to measuring the occupation of each listed mode and forgetting
    the outcome; trace preserving and positivity preserving.
    """
    dim = rho.shape[0]
    if n_modes is None:
        n_modes = dim.bit_length() - 1
    if dim != (1 << n_modes):
        raise ValueError(f"rho dimension {dim} is not a power of two")
    modes = sorted(set(modes))
    if any(m < 0 or m >= n_modes for m in modes):
        raise ValueError(f"modes {modes} outside 0..{n_modes - 1}")
    mask = sum(1 << m for m in modes)
    pattern = np.arange(dim) & mask
    keep = pattern[:, None] == pattern[None, :]
    return np.where(keep, rho, 0.0)


def is_hermitian(op: np.ndarray, atol: float = HERMITICITY_ATOL) -> bool:
    return bool(np.abs(op - op.conj().T).max() <= atol)


def validate_density_matrix(rho: np.ndarray) -> None:
    """Raise ValueError unless rho is a valid density matrix.

    Checks unit trace (1e-10), Hermiticity (1e-12 entrywise) and spectrum
    bounded below by -1e-10.
    """
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if abs(np.trace(rho) - 1.0) > TRACE_ATOL:
        raise ValueError(f"trace {np.trace(rho)} differs from 1 beyond {TRACE_ATOL}")
    if not is_hermitian(rho):
        raise ValueError("density matrix is not Hermitian within 1e-12")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if w[0] < -POSITIVITY_ATOL:
        raise ValueError(f"negative eigenvalue {w[0]} below -{POSITIVITY_ATOL}")
