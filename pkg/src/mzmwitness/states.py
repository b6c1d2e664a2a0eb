"""State constructors: Majorana-paired states, Andreev product states, hybrids.

Two Hilbert spaces appear throughout.  A Majorana-paired state on six sites
lives in the 8-dimensional Fock space of its three pair modes; an Andreev
bound state lives in the 64-dimensional Fock space of six local fermionic
modes (site i is mode i-1).  The same witness coefficients are evaluated
against different measurement operators in the two pictures, which is the
whole point of the comparison.

Representation convention for the pair-mode picture: sites are grouped into
reference modes by sorting them ascending and pairing neighbours, e.g. sites
1..6 give reference modes (1,2), (3,4), (5,6).  The Majorana operator of the
first site in a reference mode is c + c^dag, the second is -i(c^dag - c).
A physical pairing such as (1,5), (3,6), (2,4) is then expressed through
operator products in this one fixed representation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .fock import FockSpace, dephase_modes, parity_op

ODD = "odd"
EVEN = "even"

L_SITES = (1, 3, 5)
R_SITES = (2, 4, 6)
DEFAULT_CUT = (L_SITES, R_SITES)

NORMALIZATION_ATOL = 1e-12


def _check_parity(parity: str) -> str:
    if parity not in (ODD, EVEN):
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
    return parity


@dataclass(frozen=True)
class Pairing:
    """A perfect matching of an even set of sites into ordered pairs.

    Pair order within a tuple matters: occupation 0 of pair (a, b) means
    i*gamma_a*gamma_b = +1, and swapping a with b flips that sign.
    """

    pairs: tuple[tuple[int, int], ...]

    def __init__(self, pairs):
        object.__setattr__(self, "pairs", tuple((int(a), int(b)) for a, b in pairs))
        seen: list[int] = []
        for a, b in self.pairs:
            seen.extend((a, b))
        if len(set(seen)) != len(seen):
            raise ValueError(f"pairing {self.pairs} reuses a site")
        if not self.pairs:
            raise ValueError("pairing needs at least one pair")

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(sorted(s for p in self.pairs for s in p))

    @property
    def n_pairs(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> tuple[tuple[int, int], ...]:
        """Pairs in the canonical internal order (ascending by smaller site)."""
        return tuple(sorted(self.pairs, key=min))


CANONICAL_PAIRING = Pairing(((1, 5), (3, 6), (2, 4)))

# Coefficient basis of the canonical pairing, one row per coefficient A..D.
# Each row gives the pair occupations {(1,5): n, (3,6): n, (2,4): n} together
# with the sign of that basis ket relative to the internally ordered ladder
# construction; the signs make the four-term superposition reproduce the
# closed-form pair correlators.
_CANONICAL_TABLE = {
    ODD: (
        ({(1, 5): 0, (3, 6): 1, (2, 4): 0}, 1.0),
        ({(1, 5): 0, (3, 6): 0, (2, 4): 1}, 1.0),
        ({(1, 5): 1, (3, 6): 1, (2, 4): 1}, -1.0),
        ({(1, 5): 1, (3, 6): 0, (2, 4): 0}, 1.0),
    ),
    EVEN: (
        ({(1, 5): 1, (3, 6): 1, (2, 4): 0}, 1.0),
        ({(1, 5): 1, (3, 6): 0, (2, 4): 1}, 1.0),
        ({(1, 5): 0, (3, 6): 1, (2, 4): 1}, -1.0),
        ({(1, 5): 0, (3, 6): 0, (2, 4): 0}, 1.0),
    ),
}


@lru_cache(maxsize=None)
def _site_majoranas_cached(sites: tuple[int, ...]) -> dict[int, np.ndarray]:
    if len(sites) % 2:
        raise ValueError(f"need an even number of sites, got {sites}")
    space = FockSpace(len(sites) // 2)
    gammas = space.majorana_ops()
    out = {}
    for k in range(space.n_modes):
        out[sites[2 * k]] = gammas[2 * k]
        out[sites[2 * k + 1]] = gammas[2 * k + 1]
    return out


def site_majoranas(sites=(1, 2, 3, 4, 5, 6)) -> dict[int, np.ndarray]:
    """Majorana matrix for each site label in the reference representation."""
    return dict(_site_majoranas_cached(tuple(sorted(sites))))


def pair_parity_operator(pairing_pair: tuple[int, int], sites=(1, 2, 3, 4, 5, 6)) -> np.ndarray:
    g = site_majoranas(sites)
    a, b = pairing_pair
    return parity_op(g[a], g[b])


def _pairing_total_parity_sign(pairs_in_order) -> float:
    """Sign relating the product of pair parities to the total parity operator.

    prod_p (i gamma_a gamma_b) equals sign * (-1)^N with sign the permutation
    parity of the concatenated site sequence against ascending order.
    """
    seq = [s for p in pairs_in_order for s in p]
    perm = np.argsort(seq)
    sign = 1.0
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def sector_patterns(pairing: Pairing, parity: str) -> tuple[dict, ...]:
    """Pair-occupation patterns spanning one total-parity sector.

    For the canonical six-site pairing the order matches the four named
    coefficients.  For other pairings, patterns are enumerated in ascending
    binary order of the occupations of the internally sorted pairs.
    """
    _check_parity(parity)
    if frozenset(pairing.pairs) == frozenset(CANONICAL_PAIRING.pairs):
        return tuple(dict(p) for p, _ in _CANONICAL_TABLE[parity])
    sorted_pairs = pairing.sorted_pairs()
    sign = _pairing_total_parity_sign(sorted_pairs)
    want = (-1.0 if parity == ODD else 1.0) * sign
    out = []
    for bits in range(1 << pairing.n_pairs):
        occ = [(bits >> k) & 1 for k in range(pairing.n_pairs)]
        if (-1.0) ** sum(occ) == want:
            out.append({p: occ[k] for k, p in enumerate(sorted_pairs)})
    return tuple(out)


def _basis_signs(pairing: Pairing, parity: str) -> tuple[float, ...]:
    if frozenset(pairing.pairs) == frozenset(CANONICAL_PAIRING.pairs):
        return tuple(s for _, s in _CANONICAL_TABLE[parity])
    return tuple(1.0 for _ in sector_patterns(pairing, parity))


@lru_cache(maxsize=None)
def _sector_basis_cached(pairs: tuple, parity: str) -> np.ndarray:
    pairing = Pairing(pairs)
    sites = pairing.sites
    g = _site_majoranas_cached(sites)
    sorted_pairs = pairing.sorted_pairs()

    # Quasiparticle operators of the physical pairing in the reference
    # representation; d annihilates the pair mode, so occupation n of pair
    # (a, b) means i gamma_a gamma_b = 1 - 2n.
    lower = {p: (g[p[0]] - 1j * g[p[1]]) / 2 for p in sorted_pairs}
    raise_ = {p: (g[p[0]] + 1j * g[p[1]]) / 2 for p in sorted_pairs}

    stacked = np.vstack([lower[p] for p in sorted_pairs])
    _, svals, vh = np.linalg.svd(stacked)
    if svals[-1] > 1e-10:
        raise ValueError(f"pairing {pairs} has no common vacuum")
    vac = vh[-1].conj()
    k = int(np.argmax(np.abs(vac)))
    vac = vac * (np.abs(vac[k]) / vac[k])

    columns = []
    signs = _basis_signs(pairing, parity)
    for pattern, sgn in zip(sector_patterns(pairing, parity), signs):
        vec = vac.copy()
        # raising operators applied with the lowest pair leftmost
        for p in reversed(sorted_pairs):
            if pattern[p]:
                vec = raise_[p] @ vec
        norm = np.linalg.norm(vec)
        if norm < 1e-12:
            raise ValueError("ladder construction produced a null vector")
        columns.append(sgn * vec / norm)
    basis = np.column_stack(columns)
    basis.setflags(write=False)
    return basis


def mzm_sector_basis(pairing: Pairing = CANONICAL_PAIRING, parity: str = ODD) -> np.ndarray:
    """Orthonormal kets of one total-parity sector, one column per coefficient."""
    _check_parity(parity)
    return _sector_basis_cached(pairing.pairs, parity).copy()


@dataclass(frozen=True)
class MzmState:
    """A pure Majorana-paired state: pairing, total-parity sector, coefficients.

    Coefficients attach to the sector patterns of ``sector_patterns`` and must
    be normalized.  Real coefficients are the physical default; complex ones
    are accepted for sampling experiments.
    """

    pairing: Pairing = CANONICAL_PAIRING
    parity: str = ODD
    coeffs: tuple = (1.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        _check_parity(self.parity)
        coeffs = tuple(complex(c) for c in self.coeffs)
        if all(abs(c.imag) < 1e-15 for c in coeffs):
            coeffs = tuple(c.real for c in coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        expected = len(sector_patterns(self.pairing, self.parity))
        if len(coeffs) != expected:
            raise ValueError(f"need {expected} coefficients, got {len(coeffs)}")
        norm = sum(abs(c) ** 2 for c in coeffs)
        if abs(norm - 1.0) > NORMALIZATION_ATOL:
            raise ValueError(f"coefficients not normalized: |c|^2 = {norm}")

    @property
    def n_modes(self) -> int:
        return self.pairing.n_pairs


def mzm_state_vector(state: MzmState) -> np.ndarray:
    basis = _sector_basis_cached(state.pairing.pairs, state.parity)
    return basis @ np.asarray(state.coeffs, dtype=complex)


def build_mzm_state(pairing_or_state, coeffs=None, parity=None) -> np.ndarray:
    """Pure-state density matrix of a Majorana-paired state.

    Accepts either a ready ``MzmState`` or ``(pairing, coeffs, parity)``.
    """
    if isinstance(pairing_or_state, MzmState):
        state = pairing_or_state
    else:
        state = MzmState(pairing=pairing_or_state, parity=parity, coeffs=tuple(coeffs))
    psi = mzm_state_vector(state)
    return np.outer(psi, psi.conj())


def sample_mzm_uniform(parity: str, rng: np.random.Generator,
                       complex_coeffs: bool = False) -> MzmState:
    """Draw a Majorana-paired state uniformly from one parity sector.

    Real mode: coefficients uniform on the unit 3-sphere, so any single
    coefficient has marginal density proportional to sqrt(1 - u^2).
    Complex mode (experimental flag): Haar-like, via normalized complex
    Gaussians.
    """
    coeffs = sample_mzm_coeff_batch(rng, 1, complex_coeffs=complex_coeffs)[0]
    return MzmState(pairing=CANONICAL_PAIRING, parity=parity, coeffs=tuple(coeffs))


def sample_mzm_coeff_batch(rng: np.random.Generator, n: int,
                           complex_coeffs: bool = False) -> np.ndarray:
    """(n, 4) array of normalized coefficient vectors."""
    if complex_coeffs:
        z = rng.standard_normal((n, 4)) + 1j * rng.standard_normal((n, 4))
    else:
        z = rng.standard_normal((n, 4))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


@dataclass(frozen=True)
class AbsSiteParams:
    """One site of an Andreev product state.

    ``u`` and ``v`` are the particle and hole weights of the site's
    quasiparticle operator |u| c + |v| c^dag and must satisfy u^2 + v^2 = 1;
    they shape the measured operator, not the state.  The site density matrix
    is set by the occupation probability and the (superselection-breaking,
    bound-saturating) coherence <1|rho|0>.
    """

    u: float = 1.0
    v: float = 0.0
    occupation: float = 0.0
    coherence: complex = 0.0

    def __post_init__(self):
        if self.u < 0 or self.v < 0:
            raise ValueError("u and v must be nonnegative")
        if abs(self.u ** 2 + self.v ** 2 - 1.0) > NORMALIZATION_ATOL:
            raise ValueError(f"u^2 + v^2 = {self.u**2 + self.v**2} must be 1")
        if not 0.0 <= self.occupation <= 1.0:
            raise ValueError(f"occupation {self.occupation} outside [0, 1]")
        n = self.occupation
        if abs(self.coherence) ** 2 > n * (1.0 - n) + 1e-12:
            raise ValueError("coherence too large for a positive site matrix")

    def density(self) -> np.ndarray:
        n = self.occupation
        k = complex(self.coherence)
        return np.array([[1.0 - n, np.conj(k)], [k, n]], dtype=complex)


@dataclass(frozen=True)
class AbsState:
    """Product of per-site density matrices over local fermionic modes."""

    site_params: tuple
    sites: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    cut: tuple = DEFAULT_CUT

    def __post_init__(self):
        object.__setattr__(self, "site_params", tuple(self.site_params))
        object.__setattr__(self, "sites", tuple(self.sites))
        if len(self.site_params) != len(self.sites):
            raise ValueError("one AbsSiteParams per site required")
        if len(set(self.sites)) != len(self.sites):
            raise ValueError("duplicate site labels")

    def params_for(self, site: int) -> AbsSiteParams:
        return self.site_params[self.sites.index(site)]


def build_abs_state(state_or_params, sites=None) -> np.ndarray:
    """Product density matrix, site i occupying mode i's slot in label order."""
    if isinstance(state_or_params, AbsState):
        state = state_or_params
    else:
        state = AbsState(site_params=tuple(state_or_params),
                         sites=tuple(sites) if sites else (1, 2, 3, 4, 5, 6))
    order = np.argsort(state.sites)
    rho = np.array([[1.0]], dtype=complex)
    # kron builds from the highest mode down so the lowest site is the
    # least significant bit
    for idx in reversed(order):
        rho = np.kron(rho, state.site_params[idx].density())
    return rho


@dataclass(frozen=True)
class HybridState:
    """A Majorana-paired block tensored with an Andreev product block."""

    mzm_part: MzmState
    abs_part: AbsState

    def __post_init__(self):
        m_sites = set(self.mzm_part.pairing.sites)
        a_sites = set(self.abs_part.sites)
        if m_sites & a_sites:
            raise ValueError(f"blocks overlap on sites {sorted(m_sites & a_sites)}")

    @property
    def dim(self) -> int:
        return (1 << self.mzm_part.n_modes) * (1 << len(self.abs_part.sites))


def build_hybrid_state(hybrid: HybridState) -> np.ndarray:
    """Density matrix of the hybrid, Majorana block in the fast tensor slot."""
    rho_m = build_mzm_state(hybrid.mzm_part)
    rho_a = build_abs_state(hybrid.abs_part)
    return np.kron(rho_a, rho_m)


def decohere_across_cut(rho: np.ndarray, cut=DEFAULT_CUT, kind: str = "abs") -> np.ndarray:
    """Model of the entanglement-elimination step.

    For a state of local fermionic modes (``kind='abs'``) this dephases the
    occupations of the first cut side, which removes every cross-cut
    coherence and leaves a state separable across the cut.  States already
    diagonal in those occupations, in particular occupation-diagonal product
    states, are fixed points.

    For a Majorana-paired state in the pair-mode representation
    (``kind='mzm'``) the map is the identity: with all couplings closed, the
    only local handles are single Majorana operators, and those cannot erase
    pair correlations.
    """
    if kind == "mzm":
        return rho.copy()
    if kind != "abs":
        raise ValueError(f"kind must be 'abs' or 'mzm', got {kind!r}")
    dim = rho.shape[0]
    n_modes = dim.bit_length() - 1
    side_a, side_b = cut
    all_sites = sorted(list(side_a) + list(side_b))
    if all_sites != list(range(1, n_modes + 1)):
        raise ValueError(f"cut {cut} does not partition sites 1..{n_modes}")
    return dephase_modes(rho, [s - 1 for s in side_a], n_modes)


# ---------------------------------------------------------------------------
# JSON round trips


def mzm_state_to_json(state: MzmState) -> dict:
    return {
        "pairing": [list(p) for p in state.pairing.pairs],
        "parity": state.parity,
        "coeffs": [_num_to_json(c) for c in state.coeffs],
    }


def mzm_state_from_json(doc: dict) -> MzmState:
    return MzmState(
        pairing=Pairing(tuple(tuple(p) for p in doc["pairing"])),
        parity=doc["parity"],
        coeffs=tuple(_num_from_json(c) for c in doc["coeffs"]),
    )


def abs_state_to_json(state: AbsState) -> dict:
    return {
        "sites": [
            {
                "site": s,
                "u": p.u,
                "v": p.v,
                "occupation": p.occupation,
                "coherence": [complex(p.coherence).real, complex(p.coherence).imag],
            }
            for s, p in zip(state.sites, state.site_params)
        ]
    }


def abs_state_from_json(doc: dict) -> AbsState:
    sites = []
    params = []
    for entry in doc["sites"]:
        sites.append(int(entry.get("site", len(sites) + 1)))
        co = entry.get("coherence", 0.0)
        if isinstance(co, (list, tuple)):
            co = complex(co[0], co[1])
        params.append(AbsSiteParams(u=entry["u"], v=entry["v"],
                                    occupation=entry.get("occupation", entry.get("occ", 0.0)),
                                    coherence=co))
    return AbsState(site_params=tuple(params), sites=tuple(sites))


def hybrid_state_to_json(state: HybridState) -> dict:
    return {"mzm": mzm_state_to_json(state.mzm_part),
            "abs": abs_state_to_json(state.abs_part)}


def hybrid_state_from_json(doc: dict) -> HybridState:
    return HybridState(mzm_part=mzm_state_from_json(doc["mzm"]),
                       abs_part=abs_state_from_json(doc["abs"]))


def state_from_json(doc: dict):
    """Dispatch on the ``kind`` field: mzm, abs or hybrid."""
    kind = doc.get("kind")
    if kind == "mzm" or (kind is None and "pairing" in doc):
        return mzm_state_from_json(doc)
    if kind == "abs" or (kind is None and "sites" in doc):
        return abs_state_from_json(doc)
    if kind == "hybrid" or (kind is None and "mzm" in doc and "abs" in doc):
        return hybrid_state_from_json(doc)
    raise ValueError(f"unrecognized state document: kind={kind!r}")


def state_to_json(state) -> dict:
    if isinstance(state, MzmState):
        return {"kind": "mzm", **mzm_state_to_json(state)}
    if isinstance(state, AbsState):
        return {"kind": "abs", **abs_state_to_json(state)}
    if isinstance(state, HybridState):
        return {"kind": "hybrid", **hybrid_state_to_json(state)}
    raise TypeError(f"not a state object: {type(state)}")


def _num_to_json(c):
    c = complex(c)
    if c.imag == 0.0:
        return c.real
    return [c.real, c.imag]


def _num_from_json(x):
    if isinstance(x, (list, tuple)):
        return complex(x[0], x[1])
    return float(x)


def load_state(path) -> "MzmState | AbsState | HybridState":
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_json(json.load(fh))
