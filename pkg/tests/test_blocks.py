"""Composite blocks: sorter trees, swaps, path transforms, phase arrays.

Structural expansions are compared against their behavioral contracts and
against directly computed matrices, one block at a time.
"""

import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistfft import (
    BACKWARD,
    FORWARD,
    Mode,
    ModeBasis,
    build_cz_array,
    build_f_squared_perm,
    build_path_fourier,
    build_sorter,
    build_swap,
    complete_permutation,
    dft_oracle,
    exchanger_action,
    fold_back,
    grouped_sorter_stages,
    inverted_stages,
    operator_of,
    path_fourier_stages,
    sorter_bs_count,
    swap_bs_count,
    Exchanger,
    Netlist,
    Stage,
)


def propagate(stages, mode):
    """Exact single-mode propagation through a stage list."""
    vector = {mode: 1.0 + 0j}
    for stage in stages:
        bucket = {}
        port_map = stage.port_map()
        for m, amp in vector.items():
            element = port_map.get(m.path)
            branches = [(m, 1.0 + 0j)] if element is None else element.act(m, stage.direction)
            for out, amp2 in branches:
                bucket[out] = bucket.get(out, 0j) + amp * amp2
        vector = {m: a for m, a in bucket.items() if abs(a) > 1e-14}
    return vector


def block_operator(netlist, inputs=None):
    op = operator_of(netlist, inputs=inputs)
    return op


# --- free-function element views -------------------------------------------------


def test_exchanger_action_matches_element():
    direct = Exchanger(2, 5, 3).act(Mode(7, 2))
    assert exchanger_action(3, Mode(7, 2), path_a=2, path_b=5) == direct


# --- sorter ----------------------------------------------------------------------


@pytest.mark.parametrize("dim", [2, 4, 8])
@pytest.mark.parametrize("oam_step", [1, 2])
def test_structural_sorter_matches_contract(dim, oam_step):
    build = build_sorter(dim, oam_step)
    for k in range(-dim, 2 * dim):
        mode = Mode(oam_step * k, 0)
        result = propagate(build.netlist.stages, mode)
        expected = dict(build.contract.act(mode))
        assert result.keys() == expected.keys(), (dim, k)
        (amp,) = result.values()
        assert amp == 1.0 + 0j  # every sorter route hits an exact branch


@pytest.mark.parametrize("dim", [2, 4, 8])
def test_inverse_sorter_returns_to_root(dim):
    build = build_sorter(dim, 1, inverse=True)
    for r in range(dim):
        result = propagate(build.netlist.stages, Mode(0, r))
        assert result == {Mode(r, 0): 1.0 + 0j}


def test_sorter_off_step_oam_still_routes_unitarily():
    # OAM not aligned to the step still propagates (generic exchanger
    # angles); the sorter is only *sorted* on its contract domain.
    build = build_sorter(4, 2)
    result = propagate(build.netlist.stages, Mode(1, 0))
    assert sum(abs(a) ** 2 for a in result.values()) == pytest.approx(1.0)


def test_sorter_splitter_census():
    for dim in (2, 4, 8, 16):
        build = build_sorter(dim)
        assert build.netlist.beam_splitter_total() == sorter_bs_count(dim) == 2 * (dim - 1)


def test_grouped_sorter_merges_levels():
    stages = grouped_sorter_stages(4, 1, [[0, 1, 2, 3], [4, 5, 6, 7]])
    assert len(stages) == 2  # levels merged across groups, not concatenated
    assert len(stages[0].elements) == 2 and len(stages[1].elements) == 4
    with pytest.raises(ValueError):
        grouped_sorter_stages(4, 1, [[0, 1]])


# --- swap --------------------------------------------------------------------------


def test_swap_netlist_is_label_permutation():
    build = build_swap(4, 2, oam_step=1)
    op = block_operator(build.netlist, inputs=build.netlist.inputs)
    matrix = op.matrix
    assert matrix.shape == (8, 8)
    # permutation matrix: exactly one unit entry per column
    np.testing.assert_allclose(np.abs(matrix).sum(axis=0), np.ones(8), atol=1e-15)
    np.testing.assert_allclose(np.abs(matrix).max(axis=0), np.ones(8), atol=1e-15)


def test_swap_forward_then_inverse_is_identity():
    fwd = build_swap(4, 2, oam_step=3)
    inv = build_swap(4, 2, oam_step=3, inverse=True)
    a = operator_of(fwd.netlist)
    b = operator_of(inv.netlist, inputs=fwd.netlist.outputs)
    combined = b.matrix @ a.matrix
    np.testing.assert_allclose(combined, np.eye(8), atol=1e-15)


def test_swap_bs_count_frozen_values():
    frozen = {(2, 1): 2, (2, 2): 2, (4, 2): 7, (4, 4): 9, (8, 4): 21, (32, 16): 145}
    for (din, dout), expected in frozen.items():
        assert swap_bs_count(din, dout) == expected
        assert build_swap(din, dout).beam_splitter_count == expected


# --- path transform -----------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 4, 8])
def test_path_fourier_matches_oracle(n):
    net = build_path_fourier(n)
    op = operator_of(net)
    np.testing.assert_allclose(op.matrix, dft_oracle(n), atol=1e-12)


@pytest.mark.parametrize("n", [2, 4])
def test_path_fourier_inverse(n):
    net = build_path_fourier(n, inverse=True)
    op = operator_of(net)
    np.testing.assert_allclose(op.matrix, dft_oracle(n).conj().T, atol=1e-12)


@given(st.integers(-9, 9))
def test_path_fourier_leaves_oam_untouched(oam):
    net = build_path_fourier(4)
    inputs = [Mode(oam, p) for p in range(4)]
    op = operator_of(net, inputs=inputs)
    assert all(m.oam == oam for m in op.basis_out)
    np.testing.assert_allclose(op.matrix, dft_oracle(4), atol=1e-12)


def test_path_fourier_squared_is_reversal():
    n = 4
    op = operator_of(build_path_fourier(n))
    twice = op.matrix @ op.matrix
    reversal = np.zeros((n, n))
    for p in range(n):
        reversal[(n - p) % n, p] = 1.0
    np.testing.assert_allclose(twice, reversal, atol=1e-12)


def test_path_fourier_stage_count_recurrence():
    # T(2) = 5 and T(n) = T(n/2) + 7: parity + merged halves + twiddle + 5
    assert len(path_fourier_stages([0, 1])) == 5
    assert len(path_fourier_stages(list(range(4)))) == 12
    assert len(path_fourier_stages(list(range(8)))) == 19


def test_path_fourier_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        path_fourier_stages([0, 1, 2])


# --- phase array and reversal permutation ---------------------------------------------


@pytest.mark.parametrize("oam", [-3, 0, 2, 8])
def test_cz_array_applies_oam_proportional_phase(oam):
    d_major, dim = 4, 8
    net = build_cz_array(d_major, dim)
    step = np.pi / (d_major * dim)
    for k in range(d_major):
        result = operator_of(net, inputs=[Mode(oam, k)])
        assert list(result.basis_out) == [Mode(oam, k)]  # label untouched
        amp = result.matrix[0, 0]
        assert amp == pytest.approx(cmath.exp(2j * k * step * oam), abs=1e-12)


def test_cz_array_path_zero_is_bare():
    net = build_cz_array(4, 8)
    for stage in net.stages:
        assert 0 not in [el.in_ports[0] for el in stage.elements]


def test_f_squared_perm_matrix():
    net = build_f_squared_perm(4)
    op = operator_of(net)
    expected = np.zeros((4, 4))
    for p in range(4):
        expected[(4 - p) % 4, p] = 1.0
    np.testing.assert_allclose(op.matrix, expected, atol=1e-15)


# --- permutation completion and folding ------------------------------------------------


def test_complete_permutation_canonical_fill():
    perm = complete_permutation({0: 0, 4: 1})
    assert perm.as_dict() == {0: 0, 4: 1, 1: 4}
    assert complete_permutation({0: 0}).as_dict() == {0: 0}


def test_complete_permutation_inverse_of_fill_is_fill_of_inverse():
    fwd = complete_permutation({4 * l: l for l in range(4)})
    inv = complete_permutation({k: 4 * k for k in range(4)})
    assert fwd.inverse_dict() == inv.as_dict()


def test_fold_back_inverts_a_block():
    stages = path_fourier_stages(list(range(4)))
    folded = stages + fold_back(stages, 0, len(stages))
    ports = tuple(Mode(0, p) for p in range(4))
    net = Netlist(
        dim=4, variant="path_fourier", d_major=4, d_minor=1, path_count=4,
        stages=tuple(folded), inputs=ports, outputs=ports,
    )
    op = operator_of(net)
    np.testing.assert_allclose(op.matrix, np.eye(4), atol=1e-12)
    assert net.depth == 2 * len(stages)
    assert len(list(net.fresh_stages())) == len(stages)  # reuses don't re-count


def test_inverted_stages_flip_direction_and_order():
    stages = path_fourier_stages([0, 1])
    flipped = inverted_stages(stages)
    assert [s.direction for s in flipped] == [BACKWARD] * len(stages)
    assert [s.elements for s in flipped] == [s.elements for s in reversed(stages)]
