"""Witness functionals over cross-cut pair measurements.

The system splits into subsystems {1, 3, 5} and {2, 4, 6}; the nine measured
pairs take one site from each side.  A parameter set {a_ij} over those pairs
defines the detection functional

    value = 1 - sum_ij a_ij * d_ij

where d_ij is the measured pair datum: the pair parity <i gamma_i gamma_j>
when the sites host Majorana end modes, or the rotated-mode occupation
<b_ij^dag b_ij> for Andreev bound states.  A parameter set whose Andreev form
stays nonnegative on every product state is a valid candidate, and a negative
measured value then certifies cross-cut entanglement, i.e. nonlocal pairing.

Also here: the CHSH witness on the pair-mode space, a realignment-based
witness with its operator Schmidt decomposition, and a numerical
block-positivity search over product vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import tunneling
from .fock import FockSpace, expectation, is_hermitian
from .states import (ODD, EVEN, AbsState, HybridState, build_abs_state,
                     build_mzm_state, site_majoranas)

CROSS_PAIRS = ((1, 2), (1, 4), (1, 6), (3, 2), (3, 4), (3, 6), (5, 2), (5, 4), (5, 6))
SURVIVING_PAIRS = ((1, 4), (1, 6), (3, 4), (3, 6), (5, 2))
VANISHING_PAIRS = ((1, 2), (3, 2), (5, 4), (5, 6))

BLOCK_POSITIVITY_ATOL = 1e-8


class UnsupportedParameterError(ValueError):
    """Closed-form evaluation requested outside its five-pair support."""


@dataclass(frozen=True, init=False)
class WitnessParams:
    """Coefficients a_ij over the nine cross-cut pairs (missing keys are 0)."""

    a: tuple

    def __init__(self, a):
        entries = {}
        for key, val in dict(a).items():
            pair = (int(key[0]), int(key[1]))
            if pair not in CROSS_PAIRS:
                raise ValueError(f"{pair} is not a cross-cut pair; "
                                 f"first site must be odd, second even")
            entries[pair] = float(val)
        object.__setattr__(self, "a", tuple((p, entries.get(p, 0.0)) for p in CROSS_PAIRS))

    @classmethod
    def canonical(cls, m: float = 1.0, theta: float = math.pi,
                  a52: float = -1.0) -> "WitnessParams":
        """The rotation-form family: a_14 = a_36 = m cos(theta),
        a_16 = -a_34 = m sin(theta), with a_52 free."""
        return cls({(1, 4): m * math.cos(theta), (1, 6): m * math.sin(theta),
                    (3, 4): -m * math.sin(theta), (3, 6): m * math.cos(theta),
                    (5, 2): a52})

    def coefficient(self, pair) -> float:
        return dict(self.a)[tuple(pair)]

    def as_dict(self) -> dict:
        return dict(self.a)

    def nonzero(self) -> dict:
        return {p: v for p, v in self.a if v != 0.0}

    def five_pair_support(self) -> bool:
        return all(v == 0.0 for p, v in self.a if p in VANISHING_PAIRS)

    def canonical_form(self):
        """(m, theta, a52) if the set lies in the rotation-form family, else None."""
        d = self.as_dict()
        if not self.five_pair_support():
            return None
        if abs(d[(1, 4)] - d[(3, 6)]) > 1e-12 or abs(d[(1, 6)] + d[(3, 4)]) > 1e-12:
            return None
        m = math.hypot(d[(1, 4)], d[(1, 6)])
        theta = math.atan2(d[(1, 6)], d[(1, 4)]) if m > 0 else 0.0
        return m, theta, d[(5, 2)]

    def to_json(self) -> dict:
        form = self.canonical_form()
        if form is not None:
            m, theta, a52 = form
            return {"m": m, "theta_deg": math.degrees(theta), "a52": a52}
        return {"a": {f"{i}{j}": v for (i, j), v in self.a if v != 0.0}}

    @classmethod
    def from_json(cls, doc: dict) -> "WitnessParams":
        if "a" in doc:
            return cls({(int(k[0]), int(k[1])): float(v) for k, v in doc["a"].items()})
        theta = math.radians(doc["theta_deg"]) if "theta_deg" in doc else doc.get("theta", math.pi)
        return cls.canonical(m=doc.get("m", 1.0), theta=theta, a52=doc.get("a52", -1.0))


CANONICAL_ODD = WitnessParams.canonical(a52=-1.0)
CANONICAL_EVEN = WitnessParams.canonical(a52=+1.0)


@dataclass(frozen=True, init=False)
class TunnelCouplings:
    """Complex tunnel amplitude per site label."""

    t: tuple

    def __init__(self, t):
        object.__setattr__(self, "t", tuple(sorted((int(s), complex(v))
                                                   for s, v in dict(t).items())))

    @classmethod
    def unit(cls, sites=(1, 2, 3, 4, 5, 6)) -> "TunnelCouplings":
        return cls({s: 1.0 for s in sites})

    def amplitude(self, site: int) -> complex:
        return dict(self.t)[site]

    def to_json(self) -> dict:
        return {"t": {str(s): [v.real, v.imag] for s, v in self.t}}

    @classmethod
    def from_json(cls, doc: dict) -> "TunnelCouplings":
        out = {}
        for s, v in doc["t"].items():
            out[int(s)] = complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
        return cls(out)


def coupling_factor(t_i: complex, t_j: complex) -> float:
    """T_ij = 2|t_i^* t_j| / (|t_i|^2 + |t_j|^2), in [0, 1], 1 iff equal moduli."""
    denom = abs(t_i) ** 2 + abs(t_j) ** 2
    if denom == 0.0:
        raise ValueError("both couplings vanish")
    return 2.0 * abs(np.conj(t_i) * t_j) / denom


@dataclass(frozen=True)
class BoundCheck:
    margin: float
    holds: bool


def candidate_bound_fermion(params: WitnessParams,
                            couplings: TunnelCouplings) -> BoundCheck:
    """Nonnegativity condition on product states for the fermion witness:
    1 - sum a_ij (1 + T_ij) >= 0."""
    margin = 1.0
    for (i, j), a in params.nonzero().items():
        margin -= a * (1.0 + coupling_factor(couplings.amplitude(i),
                                             couplings.amplitude(j)))
    return BoundCheck(margin=margin, holds=margin >= 0.0)


def candidate_bound_abs(params: WitnessParams,
                        couplings: TunnelCouplings) -> BoundCheck:
    """Nonnegativity condition for the Andreev witness, with the extra sqrt(2)
    allowance for anomalous pair averages: 1 - sum a_ij (1 + sqrt(2) + T_ij) >= 0."""
    margin = 1.0
    for (i, j), a in params.nonzero().items():
        margin -= a * (1.0 + math.sqrt(2.0)
                       + coupling_factor(couplings.amplitude(i), couplings.amplitude(j)))
    return BoundCheck(margin=margin, holds=margin >= 0.0)


@dataclass(frozen=True)
class WitnessReport:
    """A witness evaluation: the value, its sign verdict and per-pair data."""

    value: float
    verdict: str
    per_pair: dict

    @staticmethod
    def from_value(value: float, per_pair: dict) -> "WitnessReport":
        return WitnessReport(value=float(value),
                             verdict="negative" if value < 0.0 else "nonnegative",
                             per_pair=dict(per_pair))


@lru_cache(maxsize=None)
def _pair_operator_cached(i: int, j: int) -> np.ndarray:
    g = site_majoranas((1, 2, 3, 4, 5, 6))
    op = 1j * g[i] @ g[j]
    op.setflags(write=False)
    return op


def mzm_pair_operator(i: int, j: int) -> np.ndarray:
    """i*gamma_i*gamma_j on the three-pair-mode space."""
    if i == j:
        raise ValueError("pair sites must be distinct")
    return _pair_operator_cached(i, j).copy()


def mzm_witness_value(rho: np.ndarray, params: WitnessParams) -> WitnessReport:
    """Evaluate the pair-parity witness on an 8-dimensional density matrix."""
    if rho.shape != (8, 8):
        raise ValueError(f"expected an 8x8 density matrix, got {rho.shape}")
    per_pair = {}
    value = 1.0
    for pair, a in params.a:
        d = expectation(_pair_operator_cached(*pair), rho).real
        per_pair[pair] = d
        value -= a * d
    return WitnessReport.from_value(value, per_pair)


def mzm_witness_closed_form(coeffs, parity: str, params: WitnessParams) -> float:
    """Closed-form witness value on a coefficient vector of the standard
    pairing (1,5), (3,6), (2,4).

    Only the five pairs {14, 16, 34, 36, 52} survive total-parity
    conservation on real-coefficient states, so a nonzero coefficient on any
    other pair has no closed form and raises.  In the even sector the terms
    measured through the first pair's raising part, a_14 and a_16, flip sign
    relative to the odd sector; the diagonal a_36 term and the a_34, a_52
    terms do not.
    """
    if not params.five_pair_support():
        raise UnsupportedParameterError(
            "closed form covers only the parity-surviving pairs "
            f"{SURVIVING_PAIRS}; zero out the others or use the matrix path")
    if parity not in (ODD, EVEN):
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
    A, B, C, D = (float(c) for c in coeffs)
    norm = A * A + B * B + C * C + D * D
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"coefficients not normalized: {norm}")
    d = params.as_dict()
    sign = 1.0 if parity == ODD else -1.0
    return (1.0
            - 2.0 * d[(3, 4)] * (C * D - A * B)
            - d[(3, 6)] * (-A * A - C * C + B * B + D * D)
            - sign * 2.0 * d[(1, 4)] * (-A * C - B * D)
            - sign * 2.0 * d[(1, 6)] * (B * C - A * D)
            - 2.0 * d[(5, 2)] * (B * D - A * C))


def abs_witness_value(rho: np.ndarray, params: WitnessParams,
                      couplings: TunnelCouplings, site_params) -> WitnessReport:
    """Evaluate the Andreev witness on a 64-dimensional density matrix.

    Each pair datum is <b^dag b> for the rotated quasiparticle mode set by
    the couplings and the sites' particle/hole weights.
    """
    if rho.shape != (64, 64):
        raise ValueError(f"expected a 64x64 density matrix, got {rho.shape}")
    if isinstance(site_params, AbsState):
        state = site_params
    else:
        state = AbsState(site_params=tuple(site_params))
    per_pair = {}
    value = 1.0
    for pair, a in params.a:
        i, j = pair
        t_i, t_j = couplings.amplitude(i), couplings.amplitude(j)
        if abs(t_i) == 0.0 and abs(t_j) == 0.0:
            if a != 0.0:
                raise ValueError(f"pair {pair} has weight {a} but no couplings")
            continue
        op = tunneling.effective_b_operator(t_i, t_j, state.params_for(i),
                                            state.params_for(j), pair,
                                            sites=state.sites)
        d = expectation(op, rho).real
        per_pair[pair] = d
        value -= a * d
    return WitnessReport.from_value(value, per_pair)


# ---------------------------------------------------------------------------
# Hybrid states: Majorana block tensored with an Andreev block


def hybrid_block_operators(hybrid: HybridState, params: WitnessParams,
                           couplings: TunnelCouplings) -> tuple[np.ndarray, np.ndarray]:
    """Per-block factors (W_m, W_a) of the product-form hybrid witness.

    W_m collects the pair-parity terms of the cross-cut pairs lying inside
    the Majorana block; W_a is identity minus the Andreev terms of the pairs
    inside the Andreev block.  Pairs straddling the two blocks are not
    measurable in the product form and must carry zero weight.
    """
    m_sites = set(hybrid.mzm_part.pairing.sites)
    a_sites = set(hybrid.abs_part.sites)
    gm = site_majoranas(tuple(sorted(m_sites)))

    dim_m = 1 << hybrid.mzm_part.n_modes
    w_m = np.zeros((dim_m, dim_m), dtype=complex)
    dim_a = 1 << len(a_sites)
    w_a = np.eye(dim_a, dtype=complex)

    for pair, a in params.nonzero().items():
        i, j = pair
        if i in m_sites and j in m_sites:
            w_m += a * 1j * gm[i] @ gm[j]
        elif i in a_sites and j in a_sites:
            op = tunneling.effective_b_operator(
                couplings.amplitude(i), couplings.amplitude(j),
                hybrid.abs_part.params_for(i), hybrid.abs_part.params_for(j),
                pair, sites=hybrid.abs_part.sites)
            w_a -= a * op
        else:
            raise ValueError(f"pair {pair} straddles the hybrid blocks; "
                             "its weight must be zero for a product-form witness")
    return w_m, w_a


def hybrid_witness_operator(hybrid: HybridState, params: WitnessParams,
                            couplings: TunnelCouplings) -> np.ndarray:
    """Full-space witness I - W_a (x) W_m, ordered to match the hybrid state."""
    w_m, w_a = hybrid_block_operators(hybrid, params, couplings)
    dim = w_m.shape[0] * w_a.shape[0]
    return np.eye(dim, dtype=complex) - np.kron(w_a, w_m)


def hybrid_witness_value(hybrid: HybridState, params: WitnessParams,
                         couplings: TunnelCouplings) -> WitnessReport:
    """value = 1 - Tr(W_m rho_m) * Tr(W_a rho_a) on the two blocks.

    With zero weight on the Andreev block this reduces to the plain
    pair-parity witness of the Majorana block.
    """
    w_m, w_a = hybrid_block_operators(hybrid, params, couplings)
    rho_m = build_mzm_state(hybrid.mzm_part)
    rho_a = build_abs_state(hybrid.abs_part)
    fac_m = expectation(w_m, rho_m).real
    fac_a = expectation(w_a, rho_a).real
    value = 1.0 - fac_m * fac_a
    return WitnessReport.from_value(value, {"mzm_block_factor": fac_m,
                                            "abs_block_factor": fac_a})


# ---------------------------------------------------------------------------
# CHSH witness on the pair-mode space


@lru_cache(maxsize=None)
def _pauli_triples() -> tuple[tuple[np.ndarray, ...], tuple[np.ndarray, ...]]:
    g = site_majoranas((1, 2, 3, 4, 5, 6))
    left = tuple(-1j * g[a] @ g[b] for a, b in ((3, 5), (5, 1), (1, 3)))
    right = tuple(-1j * g[a] @ g[b] for a, b in ((4, 6), (6, 2), (2, 4)))
    for op in left + right:
        op.setflags(write=False)
    return left, right


def chsh_local_bases() -> tuple[list[np.ndarray], list[np.ndarray]]:
    """The two local operator triples, normalized by 1/sqrt(2)."""
    left, right = _pauli_triples()
    return ([op / math.sqrt(2.0) for op in left],
            [op / math.sqrt(2.0) for op in right])


@dataclass(frozen=True, init=False)
class ChshSettings:
    """Two measurement directions per side, unit 3-vectors."""

    left: tuple
    right: tuple

    def __init__(self, left, right):
        left = tuple(tuple(float(x) for x in v) for v in left)
        right = tuple(tuple(float(x) for x in v) for v in right)
        if len(left) != 2 or len(right) != 2:
            raise ValueError("need exactly two directions per side")
        for v in left + right:
            if len(v) != 3 or abs(math.hypot(*v) - 1.0) > 1e-9:
                raise ValueError(f"direction {v} is not a unit 3-vector")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @classmethod
    def from_angles(cls, left_angles, right_angles) -> "ChshSettings":
        """Angle pairs (theta, phi) per direction, physics convention."""
        def vec(th, ph):
            return (math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph),
                    math.cos(th))
        return cls([vec(*a) for a in left_angles], [vec(*a) for a in right_angles])


def _direction_op(direction, side_ops) -> np.ndarray:
    return sum(x * op for x, op in zip(direction, side_ops))


def chsh_witness_value(rho: np.ndarray, settings: ChshSettings) -> float:
    """1 - [<L1 R1> - <L1 R2> + <L2 R2> + <L2 R1>] with 1/sqrt(2) local bases.

    Nonnegative on every state separable across the subsystem cut; reaches
    1 - sqrt(2) on a maximally entangled pair-mode state at optimal settings.
    """
    if rho.shape != (8, 8):
        raise ValueError(f"expected an 8x8 density matrix, got {rho.shape}")
    sl, sr = chsh_local_bases()
    l1 = _direction_op(settings.left[0], sl)
    l2 = _direction_op(settings.left[1], sl)
    r1 = _direction_op(settings.right[0], sr)
    r2 = _direction_op(settings.right[1], sr)
    combo = l1 @ r1 - l1 @ r2 + l2 @ r2 + l2 @ r1
    return 1.0 - expectation(combo, rho).real


def lr_correlation_matrix(rho: np.ndarray) -> np.ndarray:
    """3x3 matrix of unnormalized local-operator correlations."""
    left, right = _pauli_triples()
    corr = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            corr[i, j] = expectation(left[i] @ right[j], rho).real
    return corr


def optimal_chsh_settings(rho: np.ndarray) -> ChshSettings:
    """Settings maximizing the CHSH combination for the given state.

    Built from the singular directions of the correlation matrix, with a
    deterministic sign search over the eight reflection choices.
    """
    corr = lr_correlation_matrix(rho)
    u, _, vt = np.linalg.svd(corr)
    a1, a2 = u[:, 0], u[:, 1]
    b_plus = (vt[0] + vt[1]) / np.linalg.norm(vt[0] + vt[1])
    b_minus = (vt[0] - vt[1]) / np.linalg.norm(vt[0] - vt[1])
    best = None
    for sa in (1.0, -1.0):
        for sb in (1.0, -1.0):
            for sc in (1.0, -1.0):
                settings = ChshSettings((tuple(a1), tuple(sa * a2)),
                                        (tuple(sb * b_plus), tuple(sc * b_minus)))
                val = chsh_witness_value(rho, settings)
                if best is None or val < best[0]:
                    best = (val, settings)
    return best[1]


def lr_product_state(bloch_left, bloch_right) -> np.ndarray:
    """A density matrix separable across the subsystem cut.

    Product of the commuting positive factors (I + l . Sigma_L) and
    (I + r . Sigma_R) for Bloch vectors of length at most 1.
    """
    if np.linalg.norm(bloch_left) > 1 + 1e-12 or np.linalg.norm(bloch_right) > 1 + 1e-12:
        raise ValueError("Bloch vectors must have length at most 1")
    left, right = _pauli_triples()
    eye = np.eye(8, dtype=complex)
    fl = eye + sum(x * op for x, op in zip(bloch_left, left))
    fr = eye + sum(x * op for x, op in zip(bloch_right, right))
    return fl @ fr / 8.0


@lru_cache(maxsize=None)
def _sector_qubit_basis_cached(parity: str) -> np.ndarray:
    left, right = _pauli_triples()
    x_l, z_l = left[0], left[2]
    x_r, z_r = right[0], right[2]
    p_tot = FockSpace(3).total_parity()
    sector = 1.0 if parity == EVEN else -1.0
    eye = np.eye(8)
    proj = (eye + z_l) @ (eye + z_r) @ (eye + sector * p_tot) / 8.0
    w, v = np.linalg.eigh(proj)
    seed = v[:, -1]
    if w[-1] < 0.9:
        raise RuntimeError("sector seed projector is not rank one")
    k = int(np.argmax(np.abs(seed)))
    seed = seed * (np.abs(seed[k]) / seed[k])
    cols = [seed, x_r @ seed, x_l @ seed, x_l @ (x_r @ seed)]
    basis = np.column_stack(cols)
    basis.setflags(write=False)
    return basis


def sector_qubit_basis(parity: str) -> np.ndarray:
    """Columns spanning one total-parity sector as a two-qubit product basis.

    Column order is |z_L z_R> over (+,+), (+,-), (-,+), (-,-), so restricted
    operators read as 2x2 (x) 2x2 blocks with the left qubit slow.
    """
    if parity not in (ODD, EVEN):
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
    return _sector_qubit_basis_cached(parity).copy()


def restrict_to_sector_qubits(op: np.ndarray, parity: str) -> np.ndarray:
    """Compress an 8x8 operator to its 4x4 block on one parity sector."""
    basis = _sector_qubit_basis_cached(parity)
    return basis.conj().T @ op @ basis


def mzm_witness_operator(params: WitnessParams) -> np.ndarray:
    """The witness as an 8x8 matrix, I - sum a_ij i gamma_i gamma_j."""
    op = np.eye(8, dtype=complex)
    for pair, a in params.nonzero().items():
        op -= a * _pair_operator_cached(*pair)
    return op


# ---------------------------------------------------------------------------
# Realignment (operator-Schmidt) witness


def operator_schmidt(rho: np.ndarray, dims: tuple[int, int]):
    """Operator Schmidt decomposition rho = sum_k s_k A_k (x) B_k.

    Returns (coefficients, A operators, B operators); the operator sets are
    orthonormal under the trace inner product.
    """
    d_a, d_b = dims
    if rho.shape != (d_a * d_b, d_a * d_b):
        raise ValueError(f"rho shape {rho.shape} incompatible with dims {dims}")
    blocks = rho.reshape(d_a, d_b, d_a, d_b).transpose(0, 2, 1, 3)
    realigned = blocks.reshape(d_a * d_a, d_b * d_b)
    u, s, vh = np.linalg.svd(realigned)
    keep = s > 1e-12
    ops_a = [u[:, k].reshape(d_a, d_a) for k in range(len(s)) if keep[k]]
    ops_b = [vh[k, :].conj().reshape(d_b, d_b) for k in range(len(s)) if keep[k]]
    return s[keep], ops_a, ops_b


def ccnr_witness(rho: np.ndarray, dims: tuple[int, int] | None = None):
    """Witness I - sum_k A_k (x) B_k from the operator Schmidt pairs of rho.

    Returns (operator, value) with value = 1 - sum_k s_k; a value below zero
    certifies entanglement across the split, while every separable state
    stays nonnegative.  Without explicit dims the mode count must split
    evenly, otherwise this raises.
    """
    if dims is None:
        n_modes = rho.shape[0].bit_length() - 1
        if n_modes % 2:
            raise ValueError(f"{n_modes} modes cannot split evenly; pass dims")
        half = 1 << (n_modes // 2)
        dims = (half, half)
    s, ops_a, ops_b = operator_schmidt(rho, dims)
    w = np.eye(dims[0] * dims[1], dtype=complex)
    for a_k, b_k in zip(ops_a, ops_b):
        w -= np.kron(a_k, b_k)
    w = 0.5 * (w + w.conj().T)
    return w, float(1.0 - s.sum())


# ---------------------------------------------------------------------------
# Numerical block-positivity certification


@dataclass(frozen=True)
class BlockPositivityResult:
    minimum: float
    vector_a: np.ndarray
    vector_b: np.ndarray
    restarts: int


def block_positivity_min(w: np.ndarray, dims: tuple[int, int],
                         restarts: int = 64, seed: int = 0,
                         max_iter: int = 300, tol: float = 1e-13) -> BlockPositivityResult:
    """Minimize <psi (x) phi| w |psi (x) phi> over normalized product vectors.

    Multi-start alternating eigenvector descent; each sweep is monotone, so
    the reported minimum is an upper bound on the true product minimum and,
    with enough restarts, numerically certifies block positivity.  Restart
    streams derive from the seed, and the reduction is a deterministic min,
    so results do not depend on evaluation order.
    """
    d_a, d_b = dims
    if w.shape != (d_a * d_b, d_a * d_b):
        raise ValueError(f"operator shape {w.shape} incompatible with dims {dims}")
    if not is_hermitian(w, atol=1e-10):
        raise ValueError("block positivity is defined for Hermitian operators")
    w4 = w.reshape(d_a, d_b, d_a, d_b)
    best = None
    for k in range(restarts):
        rng = np.random.default_rng([seed, k])
        phi = rng.standard_normal(d_b) + 1j * rng.standard_normal(d_b)
        phi /= np.linalg.norm(phi)
        psi = None
        value = np.inf
        for _ in range(max_iter):
            k_a = np.einsum("j,ijkl,l->ik", phi.conj(), w4, phi)
            vals, vecs = np.linalg.eigh(0.5 * (k_a + k_a.conj().T))
            psi = vecs[:, 0]
            k_b = np.einsum("i,ijkl,k->jl", psi.conj(), w4, psi)
            vals, vecs = np.linalg.eigh(0.5 * (k_b + k_b.conj().T))
            phi = vecs[:, 0]
            new_value = float(vals[0])
            if abs(new_value - value) < tol:
                value = new_value
                break
            value = new_value
        if best is None or value < best[0]:
            best = (value, psi, phi)
    return BlockPositivityResult(minimum=best[0], vector_a=best[1],
                                 vector_b=best[2], restarts=restarts)
