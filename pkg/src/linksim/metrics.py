"""Entanglement and distance measures, plus closed-form fidelity oracles.

The fidelity convention is Tr sqrt(sqrt(rho) sigma sqrt(rho)) -- note the
square root: the separable-vs-Bell baseline is 1/sqrt(2) ~ 0.707107. For a
pure target |psi> this reduces to sqrt(<psi|rho|psi>).

The closed-form oracles assume real vacuum amplitudes; complex input is
folded through the symmetrization a_i b_j -> (a_i* b_j + a_i b_j*) / 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import sqrt

import numpy as np

from .channels import Y, BadProbabilityError
from .linalg import (
    DensityMatrix,
    DimMismatchError,
    eig_hermitian,
    partial_trace,
    sqrt_psd,
)


class DivisionByZeroError(ZeroDivisionError):
    """Closed-form fidelity denominator vanished (zero-probability outcome)."""


# ---------------------------------------------------------------------------
# target states


@dataclass(frozen=True)
class TargetState:
    """Named pure target with its amplitude vector."""

    kind: str  # 'bell+', 'bell-', 'ghz+', 'ghz-', 'w'
    n: int
    vector: np.ndarray


def bell_state(sign: int = +1) -> np.ndarray:
    """|Phi+-> = (|00> +- |11>) / sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[0] = 1.0
    v[3] = sign
    return v / np.sqrt(2.0)


def ghz_state(n: int, phase: float = 0.0) -> np.ndarray:
    """(|0>^n + e^{i phase} |1>^n) / sqrt(2)."""
    v = np.zeros(2**n, dtype=complex)
    v[0] = 1.0
    v[-1] = np.exp(1j * phase)
    return v / np.sqrt(2.0)


def w_state(n: int, outcome: int = 0) -> np.ndarray:
    """n-qubit W state, phase-corrected for Fourier control outcome ``outcome``.

    (1/sqrt(n)) sum_l w^{-outcome * l} |0...1_l...0> with w = e^{2 pi i / n};
    outcome 0 is the plain W state.
    """
    omega = np.exp(2j * np.pi / n)
    v = np.zeros(2**n, dtype=complex)
    for l in range(n):
        v[1 << (n - 1 - l)] = omega ** (-outcome * l)
    return v / np.sqrt(n)


def target_bell(sign: int = +1) -> TargetState:
    return TargetState("bell+" if sign > 0 else "bell-", 2, bell_state(sign))


def target_ghz(n: int, phase: float = 0.0) -> TargetState:
    return TargetState("ghz+" if phase == 0.0 else "ghz-", n, ghz_state(n, phase))


def target_w(n: int) -> TargetState:
    return TargetState("w", n, w_state(n))


# ---------------------------------------------------------------------------
# fidelity


def fidelity_pure(rho: DensityMatrix, target) -> float:
    """sqrt(<psi|rho|psi>) against a pure target state."""
    psi = target.vector if isinstance(target, TargetState) else np.asarray(target)
    if rho.dim != len(psi):
        raise DimMismatchError("state and target dimensions differ")
    val = (psi.conj() @ rho.mat @ psi).real
    return sqrt(min(max(val, 0.0), 1.0))


def uhlmann_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """General Tr sqrt(sqrt(rho) sigma sqrt(rho)) form."""
    if rho.dim != sigma.dim:
        raise DimMismatchError("state dimensions differ")
    r = sqrt_psd(rho.mat)
    inner = sqrt_psd(r @ sigma.mat @ r)
    return float(np.trace(inner).real)


def fidelity_up_to_phase(rho: DensityMatrix, n: int) -> tuple[float, float]:
    """Best GHZ fidelity over the relative phase, with the optimal phase.

    Maximizes fid against (|0>^n + e^{i phi} |1>^n)/sqrt(2); the maximum is
    attained at phi = -arg rho[0, last] and only involves the extreme
    populations and the single extreme off-diagonal element.
    """
    if rho.dim != 2**n:
        raise DimMismatchError(f"state is not {n}-qubit")
    m = rho.mat
    coh = m[0, -1]
    val = 0.5 * (m[0, 0].real + m[-1, -1].real) + abs(coh)
    phi = float(-np.angle(coh)) if abs(coh) > 0 else 0.0
    return sqrt(min(max(val, 0.0), 1.0)), phi


# ---------------------------------------------------------------------------
# concurrence


_YY = np.kron(Y, Y)


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit state.

    max{0, l1 - l2 - l3 - l4} where l_i are the square roots of the
    eigenvalues of rho rho~ in decreasing order, computed through the
    Hermitian similarity sqrt(rho) rho~ sqrt(rho).
    """
    if rho.dim != 4:
        raise DimMismatchError("concurrence needs a two-qubit state")
    rho_tilde = _YY @ rho.mat.conj() @ _YY
    r = sqrt_psd(rho.mat)
    m = r @ rho_tilde @ r
    vals, _ = eig_hermitian((m + m.conj().T) / 2.0, tol=1e-8)
    vals = np.clip(vals, 0.0, None)
    # eigenvalues at the numerical noise floor would each contribute
    # sqrt(eps) ~ 1e-8 after the square root; treat them as exact zeros
    vals[vals < 1e-12 * max(vals[0], 1e-30)] = 0.0
    lam = np.sqrt(vals)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def avg_pairwise_concurrence(rho: DensityMatrix) -> float:
    """Mean Wootters concurrence over all two-qubit reductions."""
    n = len(rho.dims)
    if n < 2:
        raise DimMismatchError("need at least two qubits")
    if n == 2:
        return concurrence(rho)
    pairs = list(combinations(range(n), 2))
    return sum(concurrence(partial_trace(rho, pair)) for pair in pairs) / len(pairs)


def avg_one_vs_rest_concurrence(rho: DensityMatrix) -> float:
    """Mean over qubits k of sqrt(max{0, 2 (1 - Tr rho_k^2)}).

    For pure global states this is the one-vs-rest bipartite concurrence;
    for mixed states it is only a descriptive purity statistic.
    """
    n = len(rho.dims)
    if n < 2:
        raise DimMismatchError("need at least two qubits")
    acc = 0.0
    for k in range(n):
        rk = partial_trace(rho, [k]).mat
        purity = float(np.trace(rk @ rk).real)
        acc += sqrt(max(0.0, 2.0 * (1.0 - purity)))
    return acc / n


# ---------------------------------------------------------------------------
# vacuum configurations and closed-form oracles


@dataclass(frozen=True)
class VacuumConfig:
    """Per-channel vacuum amplitude vectors (each unit-norm)."""

    vectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        vecs = tuple(np.asarray(v, dtype=complex) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        for v in vecs:
            if abs(np.linalg.norm(v) - 1.0) > 1e-10:
                raise ValueError("vacuum amplitude vectors must be unit norm")

    @property
    def alpha(self) -> np.ndarray:
        return self.vectors[0]

    @property
    def beta(self) -> np.ndarray:
        return self.vectors[1]


def _sym(a, b) -> float:
    # (a* b + a b*) / 2; equals a*b for real amplitudes
    return float(((np.conj(a) * b + a * np.conj(b)) / 2.0).real)


def _check_probs(*ps) -> list[float]:
    out = []
    for p in ps:
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise BadProbabilityError(f"probability {p} outside [0, 1]")
        out.append(p)
    return out


def fid_closed_depolarizing(p: float, q: float, cfg: VacuumConfig) -> float:
    """Closed-form Bell fidelity for two superposed correlated depolarizing
    channels, as a function of the noise strengths and the vacuum amplitudes."""
    p, q = _check_probs(p, q)
    a, b = cfg.alpha, cfg.beta
    m = np.array([[_sym(a[i], b[j]) for j in range(4)] for i in range(4)])
    sg = np.array([1.0, -1.0, 1.0])  # signs of the (X, Y, Z) combination
    xyz_a = m[1:, :]
    xyz_b = m[:, 1:]
    c = (
        3.0
        + 3.0 * sqrt((1 - p) * (1 - q)) * m[0, 0]
        + sqrt(3 * p * (1 - q)) * (sg @ xyz_a[:, 0])
        + sqrt(3 * q * (1 - p)) * (xyz_b[0, :] @ sg)
        + sqrt(p * q) * (sg @ m[1:, 1:] @ sg)
    )
    d = 2.0 * (
        3.0
        + 3.0 * sqrt((1 - p) * (1 - q)) * m[0, 0]
        + sqrt(p * q) * m[3, 3]
        + sqrt(3 * p * (1 - q)) * m[3, 0]
        + sqrt(3 * q * (1 - p)) * m[0, 3]
        + sqrt(p * q) * (m[1, 1] - m[1, 2] - m[2, 1] + m[2, 2])
    )
    if d <= 1e-14:
        raise DivisionByZeroError("vanishing outcome probability")
    return sqrt(max(c, 0.0) / d)


def fid_closed_bitphase(p: float, q: float, cfg: VacuumConfig) -> float:
    """Closed-form Bell fidelity for a superposed bit-flip (amplitudes in
    Pauli slots 0, 1) and phase-flip (slots 0, 3) channel pair."""
    p, q = _check_probs(p, q)
    a, b = cfg.alpha, cfg.beta
    shared = (
        1.0
        + sqrt(q * (1 - p)) * _sym(a[0], b[3])
        + sqrt((1 - p) * (1 - q)) * _sym(a[0], b[0])
    )
    num = shared + sqrt(p * (1 - q)) * _sym(a[1], b[0]) + sqrt(p * q) * _sym(a[1], b[3])
    den = 2.0 * shared
    if den <= 1e-14:
        raise DivisionByZeroError("vanishing outcome probability")
    return sqrt(max(num, 0.0) / den)


def fid_closed_w3(p, cfg: VacuumConfig) -> float:
    """Closed-form W fidelity for three superposed memoryless bit-flip
    channels with per-channel noise (p_0, p_1, p_2) and 2-vector amplitudes."""
    p = _check_probs(*p)
    if len(p) != 3 or len(cfg.vectors) != 3:
        raise DimMismatchError("expected 3 probabilities and 3 amplitude pairs")
    num = sum(p)
    den = 9.0
    for i, j in combinations(range(3), 2):
        ai, aj = cfg.vectors[i], cfg.vectors[j]
        num += 2.0 * _sym(ai[1], aj[1]) * sqrt(p[i] * p[j])
        den += 6.0 * _sym(ai[0], aj[0]) * sqrt((1 - p[i]) * (1 - p[j]))
    if den <= 1e-14:
        raise DivisionByZeroError("vanishing outcome probability")
    return sqrt(max(num, 0.0) / den)
