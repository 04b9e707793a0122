import numpy as np
import pytest

from linksim.channels import (
    BadChannelIndexError,
    BadLetterError,
    BadNormalizationError,
    BadProbabilityError,
    ChannelError,
    NotUnitaryError,
    PAULI_INDEX,
    VacuumExtendedChannel,
    X,
    Y,
    Z,
    depolarizing_correlated,
    memoryless_bitflip,
    pauli_channel_correlated,
    pauli_string,
    unitary_channel,
    validate,
)

S2 = 1.0 / np.sqrt(2.0)


def test_pauli_index_order():
    assert PAULI_INDEX == ("I", "X", "Y", "Z")


def test_pauli_string_single_letters():
    assert np.allclose(pauli_string("X"), X)
    assert np.allclose(pauli_string("Y"), Y)
    assert np.allclose(pauli_string("Z"), Z)
    assert np.allclose(pauli_string("I"), np.eye(2))


def test_pauli_string_tensor():
    ix = pauli_string("IX")
    assert ix.shape == (4, 4)
    assert np.allclose(ix, np.kron(np.eye(2), X))
    # leftmost letter acts on the leftmost tensor factor
    assert np.allclose(pauli_string("XI"), np.kron(X, np.eye(2)))


def test_pauli_string_bad_input():
    with pytest.raises(BadLetterError):
        pauli_string("XQ")
    with pytest.raises(BadLetterError):
        pauli_string("")


def test_depolarizing_kraus_weights():
    c = depolarizing_correlated(0.3, 1, (1, 0, 0, 0))
    assert len(c.kraus) == 4
    assert np.allclose(c.kraus[0], np.sqrt(0.7) * np.eye(2))
    assert np.allclose(c.kraus[1], np.sqrt(0.1) * X)
    assert validate(c).ok


def test_depolarizing_is_cptp_for_all_p():
    for p in (0.0, 0.25, 0.5, 1.0):
        for n in (1, 2, 3):
            c = depolarizing_correlated(p, n, (S2, S2, 0, 0))
            rep = validate(c)
            assert rep.cptp_defect < 1e-12
            assert rep.amplitude_defect < 1e-12


def test_depolarizing_action_on_maximally_mixed():
    c = depolarizing_correlated(0.7, 1, (1, 0, 0, 0))
    rho = np.eye(2) / 2
    assert np.allclose(c.apply(rho), rho)


def test_depolarizing_contracts_bloch_vector():
    p = 0.4
    c = depolarizing_correlated(p, 1, (1, 0, 0, 0))
    rho = np.array([[1.0, 0.0], [0.0, 0.0]])
    out = c.apply(rho)
    # z component shrinks by 1 - 4p/3
    assert out[0, 0].real == pytest.approx(0.5 + 0.5 * (1 - 4 * p / 3))


def test_bitphase_channels_via_used_slots():
    bit = pauli_channel_correlated((0.4, 0.6, 0, 0), 2, (S2, S2, 0, 0),
                                   used_slots=(0, 1))
    phase = pauli_channel_correlated((0.4, 0, 0, 0.6), 2, (S2, 0, 0, S2),
                                     used_slots=(0, 3))
    assert validate(bit).ok
    assert validate(phase).ok


def test_used_slots_rejects_leakage():
    # amplitude in a structurally empty slot must be rejected
    with pytest.raises(BadNormalizationError):
        pauli_channel_correlated((0.4, 0.6, 0, 0), 1, (S2, 0, S2, 0),
                                 used_slots=(0, 1))
    # but amplitude in a slot whose weight merely vanishes is fine
    c = pauli_channel_correlated((0.0, 1.0, 0, 0), 1, (S2, S2, 0, 0),
                                 used_slots=(0, 1))
    assert validate(c).ok


def test_pauli_channel_bad_weights():
    with pytest.raises(BadProbabilityError):
        pauli_channel_correlated((0.5, 0.2, 0.2, 0.2), 1, (1, 0, 0, 0))
    with pytest.raises(BadProbabilityError):
        pauli_channel_correlated((1.2, -0.2, 0, 0), 1, (1, 0, 0, 0))
    with pytest.raises(BadProbabilityError):
        depolarizing_correlated(1.5, 1, (1, 0, 0, 0))


def test_amplitude_normalization_enforced():
    with pytest.raises(BadNormalizationError):
        depolarizing_correlated(0.5, 1, (1, 1, 0, 0))
    with pytest.raises(BadNormalizationError):
        depolarizing_correlated(0.5, 1, (1, 0, 0))


def test_memoryless_bitflip():
    c = memoryless_bitflip(1, 3, 0.25, (S2, S2))
    assert c.dim == 8
    assert validate(c).ok
    assert np.allclose(c.kraus[1], np.sqrt(0.25) * pauli_string("IXI"))
    with pytest.raises(BadChannelIndexError):
        memoryless_bitflip(3, 3, 0.25, (S2, S2))


def test_unitary_channel():
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    c = unitary_channel(h)
    assert validate(c).ok
    assert np.allclose(c.vacuum_amplitudes, [1.0])
    with pytest.raises(NotUnitaryError):
        unitary_channel(np.array([[1, 0], [0, 2]]))


def test_channel_shape_checks():
    with pytest.raises(ChannelError):
        VacuumExtendedChannel((np.eye(2),), np.array([1.0, 0.0]))
    with pytest.raises(ChannelError):
        VacuumExtendedChannel((np.eye(2), np.eye(3)), np.array([1.0, 0.0]))


def test_validate_reports_broken_channel():
    # a deliberately non-CPTP instance still constructs; validate flags it
    c = VacuumExtendedChannel((np.eye(2),), np.array([0.5 + 0j]))
    rep = validate(c)
    assert rep.cptp_defect < 1e-12
    assert rep.amplitude_defect > 0.5
    assert not rep.ok
