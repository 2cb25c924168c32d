"""Transfer-rule oracles for every element, forward and backward.

Each element's action is pinned against hand-derived input→output tables;
inverse consistency (backward ∘ forward = identity) is property-tested.
"""

import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistfft import (
    BACKWARD,
    FORWARD,
    BeamSplitter,
    ContractDomainError,
    DovePrism,
    Exchanger,
    HalfWavePlate,
    HoloBeamSplitter,
    Hologram,
    LossModel,
    Mirror,
    Mode,
    PathPermutation,
    PhaseShifter,
    PolarizingBeamSplitter,
    SorterContract,
    SwapBlock,
    backward_action,
    element_from_record,
    element_to_record,
    primitive_action,
)

small_oam = st.integers(-40, 40)


def single(superposition):
    assert len(superposition) == 1, superposition
    return superposition[0]


def roundtrip_is_identity(element, mode, via=FORWARD):
    """Propagate forward then backward (or vice versa) and compare."""
    back = BACKWARD if via == FORWARD else FORWARD
    total = {}
    for mid, amp in element.act(mode, via):
        for out, amp2 in element.act(mid, back):
            total[out] = total.get(out, 0j) + amp * amp2
    residue = {m: a for m, a in total.items() if abs(a) > 1e-12}
    assert set(residue) == {mode}
    assert residue[mode] == pytest.approx(1.0, abs=1e-12)


# --- single-path primitives -----------------------------------------------------


@given(small_oam, st.floats(0, math.pi, allow_nan=False))
def test_dove_prism_rule(k, alpha):
    out, amp = single(DovePrism(0, alpha).act(Mode(k)))
    assert out == Mode(-k)
    assert amp == pytest.approx(-cmath.exp(2j * alpha * k), abs=1e-12)


def test_dove_prism_k0_is_exact_minus_one():
    _, amp = single(DovePrism(0, 0.7).act(Mode(0)))
    assert amp == -1.0 + 0j  # exact branch, no float residue


@given(small_oam, st.floats(0, math.pi, allow_nan=False))
def test_dove_prism_self_inverse(k, alpha):
    roundtrip_is_identity(DovePrism(0, alpha), Mode(k))


@given(small_oam, st.integers(-6, 6))
def test_hologram_shifts(k, m):
    out, amp = single(Hologram(0, m).act(Mode(k)))
    assert (out, amp) == (Mode(k + m), 1.0 + 0j)
    back, _ = single(Hologram(0, m).act(Mode(k), BACKWARD))
    assert back == Mode(k - m)


def test_phase_shifter_exact_branches():
    assert single(PhaseShifter(0, math.pi).act(Mode(2)))[1] == -1.0 + 0j
    assert single(PhaseShifter(0, -math.pi).act(Mode(2)))[1] == -1.0 + 0j
    assert single(PhaseShifter(0, 0.0).act(Mode(2)))[1] == 1.0 + 0j


def test_phase_shifter_backward_conjugates():
    fwd = single(PhaseShifter(0, 0.3).act(Mode(1)))[1]
    bwd = single(PhaseShifter(0, 0.3).act(Mode(1), BACKWARD))[1]
    assert bwd == pytest.approx(fwd.conjugate(), abs=1e-15)


@given(small_oam)
def test_mirror_rule(k):
    out, amp = single(Mirror(0).act(Mode(k)))
    assert (out, amp) == (Mode(-k), -1.0 + 0j)
    roundtrip_is_identity(Mirror(0), Mode(k))


# --- two-path splitter ---------------------------------------------------------


@given(small_oam)
def test_beam_splitter_both_entries(k):
    bs = BeamSplitter(0, 1)
    from_a = dict(bs.act(Mode(k, 0)))
    assert from_a[Mode(k, 0)] == pytest.approx(1 / math.sqrt(2))
    assert from_a[Mode(-k, 1)] == pytest.approx(1 / math.sqrt(2))
    from_b = dict(bs.act(Mode(k, 1)))
    assert from_b[Mode(-k, 0)] == pytest.approx(1 / math.sqrt(2))
    assert from_b[Mode(k, 1)] == pytest.approx(-1 / math.sqrt(2))


@given(small_oam, st.sampled_from([0, 1]))
def test_beam_splitter_is_involution(k, port):
    roundtrip_is_identity(BeamSplitter(0, 1), Mode(k, port))


def test_untouched_path_passes_through():
    out, amp = single(BeamSplitter(0, 1).act(Mode(5, 7)))
    assert (out, amp) == (Mode(5, 7), 1.0)


# --- polarization elements -------------------------------------------------------


def test_pbs_transmits_h_reflects_v():
    two_port = PolarizingBeamSplitter(0, 1)
    out, amp = single(two_port.act(Mode(3, 0, "H")))
    assert (out, amp) == (Mode(3, 0, "H"), 1.0 + 0j)
    out, amp = single(two_port.act(Mode(3, 0, "V")))
    assert (out, amp) == (Mode(-3, 1, "V"), -1.0 + 0j)


def test_pbs_one_port_retroreflects_v():
    retro = PolarizingBeamSplitter(0)
    out, amp = single(retro.act(Mode(3, 0, "V")))
    assert (out, amp) == (Mode(-3, 0, "V"), -1.0 + 0j)


def test_pbs_requires_polarization():
    with pytest.raises(ContractDomainError):
        PolarizingBeamSplitter(0, 1).act(Mode(3, 0))


@given(small_oam, st.sampled_from(["H", "V"]))
def test_pbs_self_inverse(k, pol):
    roundtrip_is_identity(PolarizingBeamSplitter(0, 1), Mode(k, 0, pol))
    roundtrip_is_identity(PolarizingBeamSplitter(0), Mode(k, 0, pol))


def test_half_wave_plate_flips():
    hwp = HalfWavePlate(0)
    assert single(hwp.act(Mode(2, 0, "H"))) == (Mode(2, 0, "V"), 1.0 + 0j)
    assert single(hwp.act(Mode(2, 0, "V"))) == (Mode(2, 0, "H"), 1.0 + 0j)
    with pytest.raises(ContractDomainError):
        hwp.act(Mode(2, 0))
    with pytest.raises(ValueError):
        HalfWavePlate(0, angle=0.3)


# --- path permutation ------------------------------------------------------------


def test_path_permutation_moves_labels_only():
    perm = PathPermutation(((0, 2), (2, 1), (1, 0)))
    assert single(perm.act(Mode(4, 0))) == (Mode(4, 2), 1.0)
    assert single(perm.act(Mode(4, 0), BACKWARD)) == (Mode(4, 1), 1.0)


def test_path_permutation_must_be_bijection():
    with pytest.raises(ValueError):
        PathPermutation(((0, 1), (1, 1)))
    with pytest.raises(ValueError):
        PathPermutation(((0, 5),))


# --- exchanger -------------------------------------------------------------------


def test_exchanger_exact_stay_and_cross():
    ex = Exchanger(0, 1, order=2)
    # OAM ≡ 0 (mod 2·order): stays on its path with amplitude exactly one
    assert single(ex.act(Mode(4, 0))) == (Mode(4, 0), 1.0 + 0j)
    # OAM ≡ order (mod 2·order): crosses, shifted by ∓order, amplitude one
    assert single(ex.act(Mode(2, 0))) == (Mode(0, 1), 1.0 + 0j)
    assert single(ex.act(Mode(0, 1))) == (Mode(2, 0), 1.0 + 0j)


@given(small_oam, st.integers(1, 8), st.sampled_from([0, 1]))
def test_exchanger_inverse(k, order, port):
    roundtrip_is_identity(Exchanger(0, 1, order), Mode(k, port))
    roundtrip_is_identity(Exchanger(0, 1, order), Mode(k, port), via=BACKWARD)


@given(small_oam, st.integers(1, 8))
def test_exchanger_preserves_norm(k, order):
    total = sum(abs(a) ** 2 for _, a in Exchanger(0, 1, order).act(Mode(k, 0)))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_exchanger_generic_amplitudes():
    # order 2, OAM 1 from the first path: θ = π/4 → balanced split
    branches = dict(Exchanger(0, 1, order=2).act(Mode(1, 0)))
    theta = math.pi / 4
    assert branches[Mode(1, 0)] == pytest.approx(cmath.exp(-1j * theta) * math.cos(theta))
    assert branches[Mode(-1, 1)] == pytest.approx(1j * cmath.exp(-1j * theta) * math.sin(theta))


# --- holo-splitter ---------------------------------------------------------------


def test_holo_bs_integral_branches():
    # even quarter-turn count → identity with amplitude exactly one
    hbs = HoloBeamSplitter(0, 1, ratio_index=0, order=4)
    assert single(hbs.act(Mode(3, 0))) == (Mode(3, 0), 1.0 + 0j)
    # odd quarter-turn count → full crossover
    hbs = HoloBeamSplitter(0, 1, ratio_index=4, order=4)
    assert single(hbs.act(Mode(3, 0))) == (Mode(-1, 1), 1.0 + 0j)
    assert single(hbs.act(Mode(3, 1))) == (Mode(7, 0), 1.0 + 0j)


@given(small_oam, st.integers(0, 8), st.integers(1, 8), st.sampled_from([0, 1]))
def test_holo_bs_inverse(k, ratio, order, port):
    roundtrip_is_identity(HoloBeamSplitter(0, 1, ratio, order), Mode(k, port))


# --- behavioral blocks -----------------------------------------------------------


def test_swap_block_frozen_examples():
    # 8→4: OAM 10 entering on the fourth input path
    swap = SwapBlock(8, 4, 1, tuple(range(8)), tuple(range(4)))
    assert single(swap.act(Mode(10, 3))) == (Mode(11, 1), 1.0)
    # 4→2 with OAM step 2, traversed backward: |6⟩ on second output path
    swap = SwapBlock(4, 2, 2, tuple(range(4)), tuple(range(2)))
    assert single(swap.act(Mode(6, 1), BACKWARD)) == (Mode(4, 3), 1.0)
    # square 2×2 block swaps the OAM and path labels
    swap = SwapBlock(2, 2, 1, (0, 1), (0, 1))
    for k in (0, 1):
        for p in (0, 1):
            assert single(swap.act(Mode(k, p))) == (Mode(p, k), 1.0)


def test_swap_block_domain_errors():
    swap = SwapBlock(4, 2, 1, tuple(range(4)), tuple(range(2)))
    with pytest.raises(ContractDomainError):
        swap.act(Mode(1, 0))  # forward needs OAM divisible by step·(in/out)
    with pytest.raises(ValueError):
        SwapBlock(2, 4, 1, (0, 1), (0, 1, 2, 3))  # output may not exceed input


@given(st.integers(-5, 5), st.integers(0, 3))
def test_swap_block_inverse(j, p):
    swap = SwapBlock(4, 2, 3, tuple(range(4)), tuple(range(2)))
    # forward domain: OAM multiple of 3·2 entering any input path
    roundtrip_is_identity(swap, Mode(6 * j, p))


def test_sorter_contract_rules():
    sorter = SorterContract(4, 2, (0, 1, 2, 3))
    # forward only from the root path: |2k⟩@0 → |8·(k//4)⟩ @ path k mod 4
    assert single(sorter.act(Mode(2 * 5, 0))) == (Mode(8, 1), 1.0)
    with pytest.raises(ContractDomainError):
        sorter.act(Mode(8, 1))  # entering forward off-root
    # backward from port r: |8j⟩@r → |2(4j+r)⟩@0
    assert single(sorter.act(Mode(8, 2), BACKWARD)) == (Mode(2 * 6, 0), 1.0)
    with pytest.raises(ContractDomainError):
        sorter.act(Mode(4, 2), BACKWARD)


def test_sorter_contract_dim_one_is_identity():
    sorter = SorterContract(1, 1, (0,))
    assert single(sorter.act(Mode(7, 0))) == (Mode(7, 0), 1.0)


# --- losses ----------------------------------------------------------------------


def test_loss_model_validation():
    with pytest.raises(ValueError):
        LossModel.uniform(0.0)
    with pytest.raises(ValueError):
        LossModel.uniform(1.2)
    assert LossModel.lossless().hologram == 1.0
    assert LossModel.uniform(0.81).beam_splitter == 0.81


def test_lossy_amplitudes_scale_by_root_transmission():
    loss = LossModel.uniform(0.81, hologram=0.64)
    _, amp = single(Hologram(0, 1).act(Mode(0), FORWARD, loss))
    assert amp == pytest.approx(0.8)  # √0.64
    branches = dict(BeamSplitter(0, 1).act(Mode(0, 0), FORWARD, loss))
    assert abs(branches[Mode(0, 0)]) == pytest.approx(0.9 / math.sqrt(2))
    _, amp = single(Mirror(0).act(Mode(1), FORWARD, loss))
    assert abs(amp) == pytest.approx(1.0)  # mirrors stay lossless


def test_exchanger_route_loss_counts_holograms():
    # The auxiliary holograms sit on the second path: routes touching it
    # lose one √T per pass, the stay-on-first-path route loses none.
    loss = LossModel(
        beam_splitter=1.0, dove=1.0, polarizing_beam_splitter=1.0,
        half_wave_plate=1.0, hologram=0.25,
    )
    ex = Exchanger(0, 1, order=2)
    # stay on first path: no hologram touched
    assert abs(single(ex.act(Mode(4, 0), FORWARD, loss))[1]) == pytest.approx(1.0)
    # cross first→second: one hologram pass
    assert abs(single(ex.act(Mode(2, 0), FORWARD, loss))[1]) == pytest.approx(0.5)
    # stay on second path (OAM+order ≡ 0 mod 2·order): in and out both pass one
    assert abs(single(ex.act(Mode(2, 1), FORWARD, loss))[1]) == pytest.approx(0.25)


# --- serialization ---------------------------------------------------------------


@pytest.mark.parametrize(
    "element",
    [
        DovePrism(2, 0.4),
        Hologram(1, -3),
        PhaseShifter(0, math.pi / 3),
        Mirror(4),
        BeamSplitter(0, 3),
        PolarizingBeamSplitter(1, 2),
        PolarizingBeamSplitter(5),
        HalfWavePlate(2),
        PathPermutation(((0, 1), (1, 0))),
        Exchanger(0, 2, 4),
        HoloBeamSplitter(1, 3, 2, 8),
        SwapBlock(4, 2, 2, (0, 1, 2, 3), (0, 1)),
        SorterContract(4, 1, (0, 1, 2, 3)),
    ],
)
@pytest.mark.parametrize("direction", [FORWARD, BACKWARD])
def test_element_record_roundtrip(element, direction):
    rec = element_to_record(element, direction)
    again, again_dir = element_from_record(rec)
    assert again == element
    assert again_dir == direction


def test_primitive_and_backward_action_helpers():
    assert primitive_action(Hologram(0, 2), Mode(1)) == [(Mode(3), 1.0)]
    assert backward_action(Hologram(0, 2), Mode(1)) == [(Mode(-1), 1.0)]
