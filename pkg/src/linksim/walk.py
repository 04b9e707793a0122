"""Discrete-time quantum walk on a cycle.

One walk step is U = T (I (x) C): a coin rotation followed by the
conditional shift T = sum_i |i+1><i| (x) |0><0| + sum_i |i-1><i| (x) |1><1|
with cyclic boundary (indices mod N). Tensor order is position (x) coin.

The two-vertex walk with a trivial coin is exactly a spatial superposition
of the two cyclic shift unitaries, with the coin playing the role of the
control system; ``verify_embedding`` checks a candidate unitary pair
against that construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import NotUnitaryError
from .linalg import DimMismatchError

UNITARY_TOL = 1e-10

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


@dataclass(frozen=True)
class WalkSpec:
    positions: int
    coin: np.ndarray
    steps: int
    initial: np.ndarray  # pure state on position (x) coin

    def __post_init__(self):
        coin = np.asarray(self.coin, dtype=complex)
        init = np.asarray(self.initial, dtype=complex)
        object.__setattr__(self, "coin", coin)
        object.__setattr__(self, "initial", init / np.linalg.norm(init))
        if coin.shape != (2, 2):
            raise DimMismatchError("coin must be 2x2")
        if len(init) != 2 * self.positions:
            raise DimMismatchError("initial state must live on position (x) coin")


def shift_operator(n: int) -> np.ndarray:
    """Cyclic conditional shift on position (x) coin."""
    up = np.roll(np.eye(n, dtype=complex), 1, axis=0)  # |i+1><i|
    down = np.roll(np.eye(n, dtype=complex), -1, axis=0)  # |i-1><i|
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    return np.kron(up, p0) + np.kron(down, p1)


def step_operator(spec: WalkSpec) -> np.ndarray:
    """One-step unitary U = T (I (x) C)."""
    c = spec.coin
    if np.max(np.abs(c.conj().T @ c - np.eye(2))) > UNITARY_TOL:
        raise NotUnitaryError("coin is not unitary")
    n = spec.positions
    return shift_operator(n) @ np.kron(np.eye(n, dtype=complex), c)


def position_distribution(state: np.ndarray, n: int) -> np.ndarray:
    """Marginal probability of each lattice position."""
    amp = state.reshape(n, 2)
    return np.sum(np.abs(amp) ** 2, axis=1)


def simulate(spec: WalkSpec) -> list[np.ndarray]:
    """Position distributions after 0, 1, ..., steps applications of U."""
    u = step_operator(spec)
    state = spec.initial.copy()
    dists = [position_distribution(state, spec.positions)]
    for _ in range(spec.steps):
        state = u @ state
        dists.append(position_distribution(state, spec.positions))
    return dists


def verify_embedding(u1: np.ndarray, u2: np.ndarray, tol: float = 1e-12) -> bool:
    """Check whether superposing (u1, u2) reproduces a two-vertex walk step.

    Builds S = u1 (x) |0><0| + u2 (x) |1><1| and compares it against
    T (I (x) C) with trivial coin C = I, where T is either the cyclic
    shift pair on the position space or the degenerate identity pair.
    """
    u1 = np.asarray(u1, dtype=complex)
    u2 = np.asarray(u2, dtype=complex)
    if u1.shape != u2.shape or u1.shape[0] != u1.shape[1]:
        raise DimMismatchError("unitaries must be square and same-dim")
    n = u1.shape[0]
    for u in (u1, u2):
        if np.max(np.abs(u.conj().T @ u - np.eye(n))) > UNITARY_TOL:
            raise NotUnitaryError("inputs must be unitary")
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    s = np.kron(u1, p0) + np.kron(u2, p1)
    up = np.roll(np.eye(n, dtype=complex), 1, axis=0)
    down = np.roll(np.eye(n, dtype=complex), -1, axis=0)
    candidates = [
        np.kron(up, p0) + np.kron(down, p1),  # cyclic shift pair
        np.eye(2 * n, dtype=complex),  # degenerate trivial-shift pair
    ]
    return any(np.max(np.abs(s - t)) <= tol for t in candidates)
