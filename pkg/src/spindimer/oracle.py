"""Brute-force two-qubit numerics used as ground truth for the closed forms.

Nothing here uses the Werner-state structure of the dimer: states are dense
4x4 matrices built by diagonalizing the Hamiltonian, entropies come from
eigenvalues, the concurrence from the spin-flip construction, and discord
from an explicit search over projective measurements on qubit B.

Qubit A is the first tensor factor.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dimer import DimerParams
from .errors import InvalidInputError
from .units import CONSTANTS, MU_0

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
I2 = np.eye(2, dtype=complex)

_SQ2 = np.sqrt(0.5)
# Columns: singlet |01>-|10>, then |01>+|10>, |00>+|11>, |00>-|11>.
BELL_BASIS = np.array([
    [0, _SQ2, -_SQ2, 0],
    [0, _SQ2, _SQ2, 0],
    [_SQ2, 0, 0, _SQ2],
    [_SQ2, 0, 0, -_SQ2],
], dtype=complex).T

# Grid used by the measurement search.
N_THETA = 32
N_PHI = 64
BASIS_TOL = 1e-6

DENSITY_ATOL = 1e-12


def heisenberg_hamiltonian(J: float) -> np.ndarray:
    """4x4 matrix of -J S1.S2 in the product basis, in kelvin."""
    return -J * sum(np.kron(s, s) for s in PAULIS) / 4.0


def check_density_matrix(rho, atol: float = DENSITY_ATOL) -> np.ndarray:
    """Validate a two-qubit density matrix and return its Hermitian part."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidInputError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, rtol=0, atol=atol):
        raise InvalidInputError("density matrix is not Hermitian")
    rho = 0.5 * (rho + rho.conj().T)
    if abs(np.trace(rho).real - 1.0) > atol:
        raise InvalidInputError(f"trace is {np.trace(rho).real!r}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -atol:
        raise InvalidInputError("density matrix has negative eigenvalues")
    return rho


def _check_temperature(T) -> float:
    T = float(T)
    if not T > 0:
        raise InvalidInputError("temperature must be > 0 K")
    return T


def _boltzmann(J: float, T: float):
    energies, vectors = np.linalg.eigh(heisenberg_hamiltonian(J))
    weights = np.exp(-(energies - energies.min()) / T)
    return weights / weights.sum(), vectors


def gibbs_state(params: DimerParams, T: float) -> np.ndarray:
    """Thermal density matrix exp(-H/T)/Z by explicit diagonalization."""
    T = _check_temperature(T)
    p, v = _boltzmann(params.J, T)
    return (v * p) @ v.conj().T


def bell_populations(rho) -> np.ndarray:
    """Diagonal of `rho` in the Bell basis (singlet first)."""
    return np.real(np.einsum("ia,ij,ja->a", BELL_BASIS.conj(), rho, BELL_BASIS))


def bell_diagonal_state(c1: float, c2: float, c3: float) -> np.ndarray:
    """(I + sum_i c_i sigma_i x sigma_i) / 4."""
    rho = np.eye(4, dtype=complex)
    for c, s in zip((c1, c2, c3), PAULIS):
        rho = rho + c * np.kron(s, s)
    return rho / 4.0


def partial_trace(rho, keep: int) -> np.ndarray:
    """Reduced state of qubit `keep` (0 = A, 1 = B)."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    if keep == 0:
        return np.einsum("ijkj->ik", r)
    return np.einsum("ijil->jl", r)


def _entropy_of_eigenvalues(lam) -> np.ndarray:
    lam = np.clip(np.real(lam), 0.0, None)
    logs = np.log2(np.where(lam > 0, lam, 1.0))
    return -np.sum(lam * logs, axis=-1)


def von_neumann_entropy(rho, validate: bool = True) -> float:
    """-Tr rho log2 rho, with 0 log 0 = 0."""
    rho = np.asarray(rho, dtype=complex)
    if validate and rho.shape == (4, 4):
        rho = check_density_matrix(rho)
    else:
        rho = 0.5 * (rho + rho.conj().T)
    return float(_entropy_of_eigenvalues(np.linalg.eigvalsh(rho)))


def mutual_information(rho) -> float:
    rho = check_density_matrix(rho)
    return (von_neumann_entropy(partial_trace(rho, 0), validate=False)
            + von_neumann_entropy(partial_trace(rho, 1), validate=False)
            - von_neumann_entropy(rho, validate=False))


def _psd_sqrt(m) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def wootters_concurrence(rho) -> float:
    """Wootters concurrence max{0, l1 - l2 - l3 - l4}.

    The l_i are the square roots of the eigenvalues of rho * rho_tilde with
    rho_tilde = (sy x sy) rho* (sy x sy). They are computed as the singular
    values of sqrt(rho) sqrt(rho_tilde), which keeps the small ones accurate
    to machine precision instead of sqrt(machine precision).
    """
    rho = check_density_matrix(rho)
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    rho_tilde = yy @ rho.conj() @ yy
    lam = np.linalg.svd(_psd_sqrt(rho) @ _psd_sqrt(rho_tilde), compute_uv=False)
    return float(max(0.0, lam[0] - lam[1:].sum()))


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective measurement on qubit B along Bloch direction (theta, phi)."""

    theta: float
    phi: float

    def vectors(self) -> np.ndarray:
        """Rows are the two orthonormal outcome states."""
        return _basis_vectors(np.asarray(self.theta), np.asarray(self.phi))

    def projectors(self) -> np.ndarray:
        v = self.vectors()
        return np.einsum("ki,kj->kij", v, v.conj())


def _basis_vectors(theta, phi) -> np.ndarray:
    """Outcome vectors, shape (..., 2, 2): [..., k, component]."""
    ct = np.cos(theta / 2.0)
    st = np.sin(theta / 2.0)
    e = np.exp(1j * phi)
    up = np.stack([ct + 0j, e * st], axis=-1)
    down = np.stack([-np.conj(e) * st, ct + 0j], axis=-1)
    return np.stack([up, down], axis=-2)


def _conditional_entropies(rho, theta, phi) -> np.ndarray:
    """sum_k p_k S(rho_k) for arrays of measurement angles."""
    v = _basis_vectors(theta, phi)
    r = rho.reshape(2, 2, 2, 2)
    # unnormalized conditional state of A: <b_k| rho |b_k>_B
    m = np.einsum("...kb,abcd,...kd->...kac", v.conj(), r, v)
    m = 0.5 * (m + np.swapaxes(m, -1, -2).conj())
    lam = np.clip(np.linalg.eigvalsh(m), 0.0, None)
    p = lam.sum(axis=-1)
    safe = np.where(p > 0, p, 1.0)
    s = _entropy_of_eigenvalues(lam / safe[..., None])
    return np.sum(np.where(p > 0, p * s, 0.0), axis=-1)


def measured_conditional_entropy(rho, basis: MeasurementBasis) -> float:
    """sum_k p_k S(rho_k) after measuring qubit B in `basis`."""
    rho = check_density_matrix(rho)
    return float(_conditional_entropies(rho, np.asarray(basis.theta),
                                        np.asarray(basis.phi)))


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    classical_correlation: float
    mutual_information: float
    basis: MeasurementBasis


def optimize_measurement(rho) -> DiscordResult:
    """Maximize the one-way classical correlation over projective measurements on B.

    A fixed 32 x 64 (theta, phi) grid locates the best basis, then
    coordinate descent with step halving refines it until both angle steps
    fall below 1e-6.
    """
    rho = check_density_matrix(rho)
    theta = (np.arange(N_THETA) + 0.5) * np.pi / N_THETA
    phi = np.arange(N_PHI) * 2.0 * np.pi / N_PHI
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    grid = _conditional_entropies(rho, tt, pp)
    i, j = np.unravel_index(np.argmin(grid), grid.shape)
    best = np.array([tt[i, j], pp[i, j]])
    best_val = grid[i, j]

    steps = np.array([np.pi / N_THETA, 2.0 * np.pi / N_PHI])
    while steps.max() >= BASIS_TOL:
        moved = False
        for axis in (0, 1):
            for sign in (1.0, -1.0):
                trial = best.copy()
                trial[axis] += sign * steps[axis]
                val = _conditional_entropies(rho, trial[0], trial[1])
                if val < best_val - 1e-15:
                    best, best_val, moved = trial, val, True
                    break
        if not moved:
            steps = steps / 2.0

    s_a = von_neumann_entropy(partial_trace(rho, 0), validate=False)
    classical = s_a - float(best_val)
    info = mutual_information(rho)
    return DiscordResult(discord=info - classical, classical_correlation=classical,
                         mutual_information=info,
                         basis=MeasurementBasis(float(best[0]), float(best[1])))


def numerical_discord(rho) -> float:
    """Entropic discord I(rho) - max_B C(rho) by measurement search."""
    return optimize_measurement(rho).discord


def fluctuation_susceptibility(params: DimerParams, T: float) -> float:
    """mu_0 N_A g^2 mu_B^2 <S_z,tot^2> / (k_B T) from the exact spectrum, SI."""
    T = _check_temperature(T)
    p, v = _boltzmann(params.J, T)
    sz = 0.5 * (np.kron(SIGMA_Z, I2) + np.kron(I2, SIGMA_Z))
    sz2 = np.real(np.einsum("in,ij,jn->n", v.conj(), sz @ sz, v))
    c = CONSTANTS
    prefactor = MU_0 * c.N_A * (params.g * c.mu_B) ** 2 / (c.k_B * T)
    return float(prefactor * np.dot(p, sz2))


def trace_norm(a) -> float:
    return float(np.linalg.svd(np.asarray(a), compute_uv=False).sum())


def bell_diagonal_geometric_discord_reference(c1: float, c2: float, c3: float) -> float:
    """Half the intermediate of |c1|, |c2|, |c3| for a Bell-diagonal state."""
    rho = bell_diagonal_state(c1, c2, c3)
    try:
        check_density_matrix(rho)
    except InvalidInputError as exc:
        raise InvalidInputError(
            f"({c1}, {c2}, {c3}) is not a valid Bell-diagonal state: {exc}") from None
    return 0.5 * float(np.sort(np.abs([c1, c2, c3]))[1])


def dephased_candidates(rho) -> list[np.ndarray]:
    """Classical-quantum states obtained by dephasing B along x, y and z."""
    rho = np.asarray(rho, dtype=complex)
    out = []
    for s in PAULIS:
        w, v = np.linalg.eigh(s)
        proj = [np.kron(I2, np.outer(v[:, k], v[:, k].conj())) for k in range(2)]
        out.append(sum(P @ rho @ P for P in proj))
    return out
