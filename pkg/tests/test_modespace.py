"""Mode-space foundations: modes, bases, states, operators, (de)serialization."""

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistfft import (
    BasisMismatchError,
    Mode,
    ModeBasis,
    ModeOperator,
    NetlistFormatError,
    NormalizationError,
    PureState,
    apply,
    state_from_json,
    state_to_json,
)

# --- Mode ----------------------------------------------------------------------


def test_mode_defaults_and_str():
    m = Mode(-3)
    assert (m.oam, m.path, m.pol) == (-3, 0, None)
    assert "-3" in str(m)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"oam": 1.5},
        {"oam": True},
        {"oam": 0, "path": -1},
        {"oam": 0, "path": 0.5},
        {"oam": 0, "pol": "X"},
        {"oam": 0, "pol": "h"},
    ],
)
def test_mode_rejects_bad_fields(kwargs):
    with pytest.raises((ValueError, TypeError)):
        Mode(**kwargs)


def test_mode_record_roundtrip():
    for m in (Mode(2), Mode(-1, 3), Mode(0, 1, "V")):
        assert Mode.from_record(m.to_record()) == m


def test_mode_ordering_path_major():
    # path is the major sort key, then OAM, then polarization
    modes = [Mode(5, 0), Mode(-2, 1), Mode(0, 0), Mode(3, 1)]
    assert sorted(modes, key=Mode.sort_key) == [
        Mode(0, 0),
        Mode(5, 0),
        Mode(-2, 1),
        Mode(3, 1),
    ]


# --- ModeBasis -----------------------------------------------------------------


def test_basis_sorts_and_dedups():
    basis = ModeBasis([Mode(3), Mode(0), Mode(3), Mode(-1)])
    assert [m.oam for m in basis] == [-1, 0, 3]
    assert basis.index(Mode(0)) == 1
    assert Mode(3) in basis and Mode(7) not in basis


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=12))
def test_basis_order_independent_of_input_order(oams):
    fwd = ModeBasis([Mode(k) for k in oams])
    rev = ModeBasis([Mode(k) for k in reversed(oams)])
    assert fwd == rev and hash(fwd) == hash(rev)


def test_basis_rejects_mixed_polarization_awareness():
    with pytest.raises(ValueError):
        ModeBasis([Mode(0, 0, "H"), Mode(1, 0)])


# --- PureState -----------------------------------------------------------------


def test_state_requires_normalization():
    basis = ModeBasis([Mode(0), Mode(1)])
    with pytest.raises(NormalizationError):
        PureState(basis, [1.0, 1.0])
    state = PureState(basis, [1.0, 1.0], require_normalized=False)
    assert state.norm == pytest.approx(np.sqrt(2))


def test_state_amplitude_outside_basis_is_zero():
    state = PureState.from_components({Mode(0): 1.0})
    assert state.amplitude(Mode(5)) == 0j


def test_state_json_roundtrip():
    state = PureState.from_components({Mode(0): 1 / np.sqrt(2), Mode(2): 1j / np.sqrt(2)})
    again = state_from_json(state_to_json(state))
    assert again.basis == state.basis
    np.testing.assert_allclose(again.amplitudes, state.amplitudes, atol=1e-15)


def test_state_json_is_bare_record_array():
    state = PureState.from_components({Mode(1, 2): 1.0})
    doc = json.loads(state_to_json(state))
    assert isinstance(doc, list)
    assert set(doc[0]) == {"oam", "path", "re", "im"}


def test_state_json_rejects_duplicates_and_bad_norm():
    text = json.dumps(
        [
            {"oam": 0, "path": 0, "re": 0.8, "im": 0.0},
            {"oam": 0, "path": 0, "re": 0.6, "im": 0.0},
        ]
    )
    with pytest.raises(NetlistFormatError):
        state_from_json(text)
    lopsided = json.dumps([{"oam": 0, "path": 0, "re": 0.5, "im": 0.0}])
    with pytest.raises(NormalizationError):
        state_from_json(lopsided)
    fixed = state_from_json(lopsided, norm_tolerance=1.0, renormalize=True)
    assert fixed.norm == pytest.approx(1.0)


# --- ModeOperator --------------------------------------------------------------


def test_operator_identity_and_unitarity():
    basis = ModeBasis([Mode(k) for k in range(3)])
    ident = ModeOperator.identity(basis)
    assert ident.unitarity_residual < 1e-15
    assert ident.is_unitary()


def test_operator_apply_matches_matrix():
    basis = ModeBasis([Mode(0), Mode(1)])
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    op = ModeOperator(basis, basis, h)
    state = PureState(basis, [1.0, 0.0])
    out = apply(op, state)
    np.testing.assert_allclose(out.amplitudes, [1 / np.sqrt(2), 1 / np.sqrt(2)])


def test_operator_basis_mismatch_raises():
    b1 = ModeBasis([Mode(0), Mode(1)])
    b2 = ModeBasis([Mode(0), Mode(2)])
    op = ModeOperator(b1, b1, np.eye(2))
    with pytest.raises(BasisMismatchError):
        apply(op, PureState(b2, [1.0, 0.0]))


def test_operator_composition_checks_bases():
    b1 = ModeBasis([Mode(0), Mode(1)])
    b2 = ModeBasis([Mode(0), Mode(2)])
    a = ModeOperator(b1, b2, np.eye(2))
    b = ModeOperator(b1, b1, np.eye(2))
    assert (a @ b).basis_out == b2
    with pytest.raises(BasisMismatchError):
        _ = b @ a
