"""Full-circuit synthesis: correctness of every variant, counts, serialization."""

import json

import numpy as np
import pytest

from twistfft import (
    BACKWARD,
    FORWARD,
    Mode,
    Netlist,
    NetlistFormatError,
    SchemeConfig,
    SchemeParameterError,
    Stage,
    VARIANTS,
    brute_force_optimal_split,
    build_scheme,
    choose_factorization,
    count_closed_form,
    dft_oracle,
    netlist_from_json,
    netlist_to_document,
    netlist_to_json,
    operator_of,
    phase_aligned_distance,
    structural_counts,
)


def scheme_matrix(netlist):
    """Simulated matrix reordered to (declared output) × (declared input)."""
    op = operator_of(netlist)
    rows = [op.basis_out.index(m) for m in netlist.outputs]
    cols = [op.basis_in.index(m) for m in netlist.inputs]
    return op.matrix[np.ix_(rows, cols)]


# --- configuration ----------------------------------------------------------------


def test_choose_factorization_frozen():
    assert choose_factorization(1) == (2, 1)
    assert choose_factorization(2) == (2, 2)
    assert choose_factorization(3) == (4, 2)
    assert choose_factorization(4) == (4, 4)
    assert choose_factorization(5) == (8, 4)


def test_brute_force_agrees_with_closed_form():
    for m in range(1, 13):
        assert brute_force_optimal_split(m) == choose_factorization(m)


@pytest.mark.parametrize(
    "dim,variant",
    [
        (3, "basic"),
        (0, "basic"),
        (1, "basic"),
        (4, "enhanced"),
        (8, "pol_enhanced"),
        (32, "pol_path_enhanced"),
    ],
)
def test_config_rejects_bad_parameters(dim, variant):
    with pytest.raises(SchemeParameterError):
        SchemeConfig.create(dim, variant)


def test_config_square_split_for_polarized():
    cfg = SchemeConfig.create(16, "pol_enhanced")
    assert cfg.d_major == cfg.d_minor == 4
    assert cfg.m_exponent == 4


# --- variant correctness -----------------------------------------------------------


@pytest.mark.parametrize("dim", [2, 4, 8, 16])
def test_basic_scheme_equals_transform(dim):
    assert phase_aligned_distance(scheme_matrix(build_scheme(dim, "basic")), dft_oracle(dim)) < 1e-9


@pytest.mark.parametrize("dim", [4, 16])
def test_pol_enhanced_equals_transform(dim):
    net = build_scheme(dim, "pol_enhanced")
    assert net.inputs[0].pol == "H" and net.outputs[0].pol == "V"
    assert phase_aligned_distance(scheme_matrix(net), dft_oracle(dim)) < 1e-9


@pytest.mark.parametrize("dim", [2, 4, 8, 16])
def test_path_enhanced_equals_transform(dim):
    net = build_scheme(dim, "path_enhanced")
    assert all(m.oam == 0 for m in net.inputs)  # path-encoded ends
    assert phase_aligned_distance(scheme_matrix(net), dft_oracle(dim)) < 1e-9


@pytest.mark.parametrize("dim", [4, 16])
def test_pol_path_enhanced_equals_transform(dim):
    net = build_scheme(dim, "pol_path_enhanced")
    assert phase_aligned_distance(scheme_matrix(net), dft_oracle(dim)) < 1e-9


def test_basic_has_no_global_phase():
    # The synthesized circuits land on the transform exactly, not merely
    # up to phase: check one matrix entry directly.
    matrix = scheme_matrix(build_scheme(8, "basic"))
    assert matrix[0, 0] == pytest.approx(1 / np.sqrt(8), abs=1e-12)


def test_unknown_variant_raises():
    with pytest.raises(SchemeParameterError):
        build_scheme(4, "fancy")


# --- reuse bookkeeping ---------------------------------------------------------------


def test_polarized_variants_tag_reused_stages():
    net = build_scheme(4, "pol_enhanced")
    reused = [s for s in net.stages if s.reuse_of is not None]
    assert reused, "folded return pass must reference reused stages"
    for stage in reused:
        original = net.stages[stage.reuse_of]
        assert stage.elements == original.elements
        assert stage.direction != original.direction
    # reuses traverse existing hardware: census counts fresh stages only
    fresh = sum(1 for s in net.stages if s.reuse_of is None)
    assert net.depth == len(net.stages) > fresh


def test_reuse_must_point_backward():
    stage = Stage("solo", (), direction=FORWARD)
    bad = Stage("early-reuse", (), direction=BACKWARD, reuse_of=5)
    with pytest.raises(ValueError):
        Netlist(
            dim=2, variant="basic", d_major=2, d_minor=1, path_count=1,
            stages=(stage, bad), inputs=(Mode(0, 0), Mode(1, 0)),
            outputs=(Mode(0, 0), Mode(1, 0)),
        )


# --- counts --------------------------------------------------------------------------


FROZEN_SPLITTERS = {
    ("basic", 2): (5, 0),
    ("basic", 4): (12, 0),
    ("basic", 8): (34, 0),
    ("basic", 16): (47, 0),
    ("basic", 32): (99, 0),
    ("basic", 64): (139, 0),
    ("pol_enhanced", 4): (7, 3),
    ("pol_enhanced", 16): (28, 5),
    ("path_enhanced", 2): (5, 0),
    ("path_enhanced", 4): (12, 0),
    ("path_enhanced", 8): (32, 0),
    ("path_enhanced", 16): (65, 0),
    ("pol_path_enhanced", 4): (7, 6),
    ("pol_path_enhanced", 16): (37, 20),
}


@pytest.mark.parametrize("variant,dim", sorted(FROZEN_SPLITTERS))
def test_frozen_splitter_counts(variant, dim):
    bs, pbs = FROZEN_SPLITTERS[(variant, dim)]
    report = count_closed_form(SchemeConfig.create(dim, variant))
    assert report.total("beam_splitter") == bs
    assert report.total("polarizing_beam_splitter") == pbs
    net = build_scheme(dim, variant)
    assert net.beam_splitter_total() == bs
    assert net.pbs_total() == pbs


def test_basic_per_kind_closed_forms():
    kinds = ("dove_prism", "hologram", "phase_shifter", "mirror")
    frozen = {4: (11, 10, 0, 25), 16: (39, 42, 11, 97)}
    for dim, expected in frozen.items():
        report = count_closed_form(SchemeConfig.create(dim, "basic"))
        assert tuple(report.total(k) for k in kinds) == expected


def test_structural_counts_match_closed_form():
    for m in range(1, 7):
        dim = 2**m
        for variant in VARIANTS:
            if variant.startswith("pol") and m % 2:
                continue
            closed = count_closed_form(SchemeConfig.create(dim, variant))
            structural = structural_counts(build_scheme(dim, variant))
            for kind in ("beam_splitter", "polarizing_beam_splitter"):
                assert structural.total(kind) == closed.total(kind), (variant, dim, kind)


def test_count_report_csv_shape():
    report = count_closed_form(SchemeConfig.create(16, "basic"))
    lines = report.to_csv().splitlines()
    assert lines[0] == "d,variant,element_kind,count,source"
    assert "16,basic,beam_splitter,47,closed_form" in lines


# --- netlist serialization -------------------------------------------------------------


@pytest.mark.parametrize("variant,dim", [("basic", 8), ("pol_enhanced", 4), ("path_enhanced", 4)])
def test_netlist_json_roundtrip_preserves_operator(variant, dim):
    net = build_scheme(dim, variant)
    again = netlist_from_json(netlist_to_json(net))
    assert again.dim == net.dim and again.variant == net.variant
    assert again.inputs == net.inputs and again.outputs == net.outputs
    np.testing.assert_allclose(scheme_matrix(again), scheme_matrix(net), atol=1e-15)
    assert again.beam_splitter_total() == net.beam_splitter_total()


def test_netlist_document_shape():
    doc = netlist_to_document(build_scheme(4, "basic"))
    assert doc["version"] == "1.0.0"
    assert doc["dim"] == 4 and doc["variant"] == "basic"
    assert doc["d_A"] == 2 and doc["d_B"] == 2
    assert "generated_at" not in doc["metadata"]
    assert doc["metadata"]["beam_splitter_total"] == 12
    assert doc["metadata"]["depth"] == len(doc["stages"])
    first = doc["stages"][0]["elements"][0]
    assert first["direction"] in (FORWARD, BACKWARD)


def test_netlist_document_stamp_opt_in():
    doc = netlist_to_document(build_scheme(4, "basic"), stamp=True)
    assert "generated_at" in doc["metadata"]


def test_netlist_parser_rejects_mixed_stage_direction():
    doc = netlist_to_document(build_scheme(4, "basic"))
    stage = next(s for s in doc["stages"] if len(s["elements"]) > 1)
    stage["elements"][0]["direction"] = BACKWARD
    with pytest.raises(NetlistFormatError):
        netlist_from_json(json.dumps(doc))


def test_netlist_parser_rejects_future_major_version():
    doc = netlist_to_document(build_scheme(4, "basic"))
    doc["version"] = "2.0.0"
    with pytest.raises(NetlistFormatError):
        netlist_from_json(json.dumps(doc))


def test_netlist_json_is_deterministic():
    a = netlist_to_json(build_scheme(8, "basic"))
    b = netlist_to_json(build_scheme(8, "basic"))
    assert a == b
