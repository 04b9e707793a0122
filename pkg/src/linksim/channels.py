"""Vacuum-extended quantum channels.

A channel is a CPTP Kraus set plus one vacuum amplitude per Kraus operator.
The amplitudes fix how the Kraus branches interfere when the channel is
placed in a spatial superposition; they satisfy sum |alpha_k|^2 = 1.

Pauli channels keep a fixed length-4 amplitude vector indexed by
``PAULI_INDEX`` = (I, X, Y, Z) even when some weights vanish, so amplitude
vectors keep their shape across parameter sweeps. Zero-weight slots must
carry zero amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import kron_all

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}
#: index 0,1,2,3 -> I, X, Y, Z; fixed global convention for weight and
#: amplitude vectors of Pauli channels.
PAULI_INDEX = ("I", "X", "Y", "Z")

CPTP_TOL = 1e-10
AMP_TOL = 1e-12


class ChannelError(Exception):
    pass


class BadLetterError(ChannelError):
    pass


class BadProbabilityError(ChannelError):
    pass


class BadNormalizationError(ChannelError):
    pass


class NotUnitaryError(ChannelError):
    pass


class BadChannelIndexError(ChannelError):
    pass


def pauli_string(spec: str) -> np.ndarray:
    """Tensor product of single-qubit Paulis, leftmost letter first.

    ``pauli_string("IXI")`` is the bit flip on qubit 1 of 3.
    """
    try:
        factors = [PAULI[c] for c in spec]
    except KeyError as exc:
        raise BadLetterError(f"bad Pauli letter {exc.args[0]!r} in {spec!r}") from exc
    if not factors:
        raise BadLetterError("empty Pauli string")
    return kron_all(*factors)


@dataclass(frozen=True)
class ValidationReport:
    cptp_defect: float
    amplitude_defect: float

    @property
    def ok(self) -> bool:
        return self.cptp_defect < CPTP_TOL and self.amplitude_defect < 1e-10


@dataclass(frozen=True)
class VacuumExtendedChannel:
    """Kraus operators paired with their vacuum amplitudes.

    The dataclass itself performs only shape checks so that diagnostic
    ``validate`` can be run on deliberately broken instances; the named
    constructors below always produce validated channels.
    """

    kraus: tuple[np.ndarray, ...]
    vacuum_amplitudes: np.ndarray
    label: str = ""

    def __post_init__(self):
        kraus = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        amps = np.asarray(self.vacuum_amplitudes, dtype=complex)
        object.__setattr__(self, "kraus", kraus)
        object.__setattr__(self, "vacuum_amplitudes", amps)
        if len(kraus) != len(amps):
            raise ChannelError(
                f"{len(kraus)} Kraus operators but {len(amps)} vacuum amplitudes"
            )
        d = kraus[0].shape[0]
        for k in kraus:
            if k.shape != (d, d):
                raise ChannelError("Kraus operators must be square and same-dim")

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Action of the reduced CPTP map: sum_k K rho K^dagger."""
        return sum(k @ rho @ k.conj().T for k in self.kraus)


def validate(c: VacuumExtendedChannel) -> ValidationReport:
    """Diagnostic CPTP and amplitude-normalization defects."""
    acc = sum(k.conj().T @ k for k in c.kraus)
    cptp_defect = float(np.max(np.abs(acc - np.eye(c.dim))))
    amp_defect = float(abs(np.sum(np.abs(c.vacuum_amplitudes) ** 2) - 1.0))
    return ValidationReport(cptp_defect, amp_defect)


def _check_amps(amps, length: int) -> np.ndarray:
    amps = np.asarray(amps, dtype=complex)
    if amps.shape != (length,):
        raise BadNormalizationError(f"expected {length} vacuum amplitudes")
    if abs(np.sum(np.abs(amps) ** 2) - 1.0) > AMP_TOL:
        raise BadNormalizationError("vacuum amplitudes must have unit norm")
    return amps


def _check_prob(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise BadProbabilityError(f"{name}={p} outside [0, 1]")
    return p


def depolarizing_correlated(p: float, n: int, amps, label: str = "") -> VacuumExtendedChannel:
    """Correlated n-qubit depolarizing channel.

    Kraus set {sqrt(1-p) I, sqrt(p/3) X^n, sqrt(p/3) Y^n, sqrt(p/3) Z^n}
    with a length-4 amplitude vector in I, X, Y, Z order.
    """
    p = _check_prob(p)
    weights = (1.0 - p, p / 3.0, p / 3.0, p / 3.0)
    return pauli_channel_correlated(weights, n, amps, label or f"depolarizing(p={p})")


def pauli_channel_correlated(weights, n: int, amps, label: str = "",
                             used_slots=(0, 1, 2, 3)) -> VacuumExtendedChannel:
    """Correlated Pauli channel with Kraus sqrt(w_k) P_k^{(x)n}.

    Bit flip is weights (1-p, p, 0, 0); phase flip is (1-q, 0, 0, q).
    Zero-weight Kraus operators are retained so amplitude vectors keep
    length 4 across a parameter sweep. Slots outside ``used_slots`` are
    structurally empty for the channel type and must carry zero amplitude
    (a weight that merely vanishes at a sweep endpoint may still interfere
    through its amplitude).
    """
    weights = [float(w) for w in weights]
    if len(weights) != 4:
        raise BadProbabilityError("expected 4 Pauli weights")
    if any(w < -1e-15 for w in weights) or abs(sum(weights) - 1.0) > 1e-12:
        raise BadProbabilityError(f"weights {weights} are not a distribution")
    amps = _check_amps(amps, 4)
    for k, (w, a) in enumerate(zip(weights, amps)):
        if k not in used_slots and (w != 0.0 or a != 0.0):
            raise BadNormalizationError(
                f"structurally empty Pauli slot {PAULI_INDEX[k]} carries "
                f"weight {w} / amplitude {a}"
            )
    kraus = tuple(
        np.sqrt(max(w, 0.0)) * pauli_string(letter * n)
        for w, letter in zip(weights, PAULI_INDEX)
    )
    return VacuumExtendedChannel(kraus, amps, label or f"pauli{tuple(weights)}")


def memoryless_bitflip(i: int, n: int, p_i: float, amps, label: str = "") -> VacuumExtendedChannel:
    """Bit-flip channel acting on qubit ``i`` of ``n`` only.

    Kraus set {sqrt(1-p_i) I, sqrt(p_i) X_i} with a length-2 amplitude
    vector.
    """
    if not 0 <= i < n:
        raise BadChannelIndexError(f"qubit index {i} outside 0..{n - 1}")
    p_i = _check_prob(p_i, "p_i")
    amps = _check_amps(amps, 2)
    x_i = pauli_string("I" * i + "X" + "I" * (n - i - 1))
    kraus = (
        np.sqrt(1.0 - p_i) * np.eye(2**n, dtype=complex),
        np.sqrt(p_i) * x_i,
    )
    return VacuumExtendedChannel(kraus, amps, label or f"bitflip(qubit={i}, p={p_i})")


def unitary_channel(u: np.ndarray, label: str = "") -> VacuumExtendedChannel:
    """Single-Kraus channel from a unitary; its vacuum amplitude is 1."""
    u = np.asarray(u, dtype=complex)
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > CPTP_TOL:
        raise NotUnitaryError("operator is not unitary")
    return VacuumExtendedChannel((u,), np.array([1.0 + 0j]), label or "unitary")
