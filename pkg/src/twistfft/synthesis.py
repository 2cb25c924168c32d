"""Synthesis of full transform circuits in four hardware variants.

Every builder returns a :class:`~twistfft.netlist.Netlist` whose simulated
operator equals the discrete Fourier matrix of size ``dim`` (kernel
``exp(+2πi·jk/dim)/√dim``) on the declared input/output mode orders, with no
global phase.  The variants trade mode resources against element count:

``basic``
    Input and output are OAM values 0..dim−1 on a single path.
``pol_enhanced``
    Same OAM ladder, but the circuit folds back on itself once; a
    polarization flip at the turning point lets the return pass reuse the
    sorter, the first swap and the path transform.  Needs a square dim.
``path_enhanced``
    Input and output are paths 0..dim−1 at OAM 0; OAM is only used
    internally, so the outer sorters shrink to parallel copies.
``pol_path_enhanced``
    Path-encoded ends plus the polarization fold.  Needs a square dim.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from . import counts
from .blocks import (
    complete_permutation,
    cz_stages,
    f_squared_permutation,
    fold_back,
    grouped_sorter_stages,
    path_fourier_stages,
    sorter_stages,
)
from .elements import (
    BACKWARD,
    HalfWavePlate,
    Mirror,
    PolarizingBeamSplitter,
    SwapBlock,
)
from .errors import SchemeParameterError
from .modespace import Mode, require_power_of_two
from .netlist import Netlist, Stage

VARIANTS = ("basic", "pol_enhanced", "path_enhanced", "pol_path_enhanced")

_POLARIZED = ("pol_enhanced", "pol_path_enhanced")


def choose_factorization(m_exponent: int) -> tuple[int, int]:
    """Closed-form optimal split dim = d_major·d_minor for the basic layout.

    The splitter total strictly decreases toward the balanced split, so the
    optimum is d_minor = 2^⌊m/2⌋ with d_major carrying the remainder (and
    d_major ≥ d_minor always).
    """
    if not isinstance(m_exponent, int) or isinstance(m_exponent, bool) or m_exponent < 1:
        raise ValueError(f"exponent must be a positive integer, got {m_exponent!r}")
    minor = m_exponent // 2
    return 1 << (m_exponent - minor), 1 << minor


def brute_force_optimal_split(m_exponent: int) -> tuple[int, int]:
    """Exhaustive minimizer of the basic splitter total over all splits.

    Walks every factorization 2^m = d_major·d_minor with d_major ≥ d_minor
    and returns the cheapest (first wins on ties).  Exists to cross-check
    :func:`choose_factorization`; both agree for every exponent.
    """
    if not isinstance(m_exponent, int) or isinstance(m_exponent, bool) or m_exponent < 1:
        raise ValueError(f"exponent must be a positive integer, got {m_exponent!r}")
    best: tuple[int, int] | None = None
    best_cost = 0
    for minor_exp in range(m_exponent // 2 + 1):
        split = (1 << (m_exponent - minor_exp), 1 << minor_exp)
        cost = counts.basic_bs_total(*split)
        if best is None or cost < best_cost:
            best, best_cost = split, cost
    assert best is not None
    return best


@dataclass(frozen=True)
class SchemeConfig:
    """Validated parameters of one transform circuit."""

    dim: int
    variant: str
    d_major: int
    d_minor: int

    @property
    def m_exponent(self) -> int:
        return require_power_of_two(self.dim)

    @classmethod
    def create(cls, dim: int, variant: str = "basic") -> "SchemeConfig":
        """Validate dimension/variant and pick the factorization.

        Raises :class:`~twistfft.errors.SchemeParameterError` for anything a
        caller could get wrong: unknown variant, dimension not a power of
        two ≥ 2, or a polarization variant with a non-square dimension.
        """
        if variant not in VARIANTS:
            raise SchemeParameterError(
                f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}"
            )
        try:
            m = require_power_of_two(dim)
        except ValueError as exc:
            raise SchemeParameterError(str(exc)) from exc
        if m < 1:
            raise SchemeParameterError(f"dimension must be at least 2, got {dim}")
        if variant in _POLARIZED and m % 2:
            raise SchemeParameterError(
                f"variant {variant!r} folds the circuit in half and needs a square "
                f"dimension (an even power of two); got {dim} = 2^{m}"
            )
        d_major, d_minor = choose_factorization(m)
        return cls(dim=dim, variant=variant, d_major=d_major, d_minor=d_minor)


# --- variant builders ---------------------------------------------------------


def _major_minor_swap(d_major: int, d_minor: int, oam_step: int) -> SwapBlock:
    return SwapBlock(
        d_major, d_minor, oam_step, tuple(range(d_major)), tuple(range(d_minor))
    )


def build_basic_scheme(dim: int) -> Netlist:
    """Single-path OAM transform: sort, transform, phase, transform, unsort.

    The OAM index q = d_major·l + m is split across paths by a radix-two
    sorter; a swap block converts the coarse index l to a path so the first
    path transform can act on it; per-path prism phases supply the cross
    term exp(2πi·m·j/dim); the second path transform acts on m; a final
    swap plus an inverse sorter reassemble the output OAM r = d_minor·k + j.
    dim = 2 skips the swaps entirely — sort, one two-path merge, unsort.
    """
    cfg = SchemeConfig.create(dim, "basic")
    d_major, d_minor = cfg.d_major, cfg.d_minor
    stages: list[Stage]
    if dim == 2:
        stages = sorter_stages(2, label="sort")
        stages += path_fourier_stages([0, 1], label="pf")
        stages += sorter_stages(2, inverse=True, label="unsort")
        path_count = 2
    else:
        major_paths = list(range(d_major))
        minor_paths = list(range(d_minor))
        stages = sorter_stages(d_major, 1, major_paths, label="sort-major")
        stages.append(Stage("swap-in", (_major_minor_swap(d_major, d_minor, d_minor),)))
        stages += path_fourier_stages(minor_paths, label="pf-minor")
        stages.append(
            Stage(
                "swap-back",
                (_major_minor_swap(d_major, d_minor, d_minor),),
                direction=BACKWARD,
            )
        )
        stages += cz_stages(d_major, dim, major_paths)
        stages += path_fourier_stages(major_paths, label="pf-major")
        stages.append(Stage("swap-out", (_major_minor_swap(d_major, d_minor, d_minor),)))
        stages += sorter_stages(d_minor, 1, minor_paths, inverse=True, label="unsort-minor")
        path_count = d_major
    ladder = tuple(Mode(q, 0) for q in range(dim))
    return Netlist(
        dim=dim,
        variant="basic",
        d_major=d_major,
        d_minor=d_minor,
        path_count=path_count,
        stages=tuple(stages),
        inputs=ladder,
        outputs=ladder,
    )


def build_pol_enhanced_scheme(dim: int) -> Netlist:
    """Folded OAM transform reusing half the hardware via polarization.

    The outbound pass (horizontal polarization) runs sorter → swap → path
    transform → swap → prism phases, as in the basic layout with the square
    split n×n.  Wave plates then flip the polarization, a path reversal
    permutation conjugates the upcoming inverse pass into a second forward
    transform, and one-port splitters plus mirrors turn the beams around.
    The return pass (vertical) traverses the path transform, first swap and
    sorter backward — the same physical elements, tagged as reuses — and
    leaves through the entry splitter's reflection.
    """
    cfg = SchemeConfig.create(dim, "pol_enhanced")
    n = cfg.d_major
    paths = list(range(n))
    stages: list[Stage] = [Stage("entry-splitter", (PolarizingBeamSplitter(0),))]
    sort_lo = len(stages)
    stages += sorter_stages(n, 1, paths, label="sort")
    sort_hi = len(stages)
    swap_in_index = len(stages)
    stages.append(Stage("swap-in", (SwapBlock(n, n, n, tuple(paths), tuple(paths)),)))
    pf_lo = len(stages)
    stages += path_fourier_stages(paths, label="pf")
    pf_hi = len(stages)
    stages.append(
        Stage(
            "swap-back",
            (SwapBlock(n, n, n, tuple(paths), tuple(paths)),),
            direction=BACKWARD,
        )
    )
    stages += cz_stages(n, dim, paths)
    stages.append(Stage("rotate-pol", tuple(HalfWavePlate(p) for p in paths)))
    stages.append(Stage("reversal-perm", (f_squared_permutation(n, paths),)))
    stages.append(Stage("turn-splitter", tuple(PolarizingBeamSplitter(p) for p in paths)))
    stages.append(Stage("turn-mirror", tuple(Mirror(p) for p in paths)))
    stages += fold_back(stages, pf_lo, pf_hi)
    stages.append(stages[swap_in_index].reversed_reuse(swap_in_index))
    stages += fold_back(stages, sort_lo, sort_hi)
    stages.append(stages[0].reversed_reuse(0))
    stages.append(Stage("exit-mirror", (Mirror(0),)))
    return Netlist(
        dim=dim,
        variant="pol_enhanced",
        d_major=n,
        d_minor=n,
        path_count=n,
        stages=tuple(stages),
        inputs=tuple(Mode(q, 0, "H") for q in range(dim)),
        outputs=tuple(Mode(r, 0, "V") for r in range(dim)),
    )


def build_path_enhanced_scheme(dim: int) -> Netlist:
    """Path-encoded transform: dim input paths at OAM 0, dim output paths.

    Writing the input index q = d_major·l + m, parallel inverse sorters
    (one per l-group, levels merged stage-wise) lift m into an OAM label on
    the group's root path; a relabeling brings the roots onto paths
    0..d_minor−1 so the first path transform can act on l.  A swap block
    converts paths to OAM before the prism phases and back out, the second
    path transform acts on m, and parallel forward sorters push the
    remaining OAM j back into the output path r = d_minor·k + j.
    """
    cfg = SchemeConfig.create(dim, "path_enhanced")
    d_major, d_minor = cfg.d_major, cfg.d_minor
    in_groups = [[d_major * l + i for i in range(d_major)] for l in range(d_minor)]
    stages = grouped_sorter_stages(d_major, 1, in_groups, inverse=True, label="collect")
    stages.append(
        Stage(
            "regroup",
            (complete_permutation({d_major * l: l for l in range(d_minor)}),),
        )
    )
    stages += path_fourier_stages(list(range(d_minor)), label="pf-minor")
    stages.append(
        Stage(
            "swap-back",
            (SwapBlock(d_major, d_minor, 1, tuple(range(d_major)), tuple(range(d_minor))),),
            direction=BACKWARD,
        )
    )
    # The internal OAM after the swap is (d_major/d_minor)·j, so the prism
    # step is scaled by d_minor/d_major relative to the basic layout.
    stages += cz_stages(
        d_major, dim, list(range(d_major)), angle_step=math.pi * d_minor / (dim * d_major)
    )
    stages += path_fourier_stages(list(range(d_major)), label="pf-major")
    stages.append(
        Stage("spread", (complete_permutation({k: d_minor * k for k in range(d_major)}),))
    )
    out_groups = [[d_minor * k + j for j in range(d_minor)] for k in range(d_major)]
    stages += grouped_sorter_stages(d_minor, d_major // d_minor, out_groups, label="fan-out")
    ports = tuple(Mode(0, q) for q in range(dim))
    return Netlist(
        dim=dim,
        variant="path_enhanced",
        d_major=d_major,
        d_minor=d_minor,
        path_count=dim,
        stages=tuple(stages),
        inputs=ports,
        outputs=ports,
    )


def build_pol_path_enhanced_scheme(dim: int) -> Netlist:
    """Path-encoded transform with the polarization fold (square dim).

    Outbound (horizontal): entry splitters on all dim paths, parallel
    inverse sorters, regrouping, one path transform, the path→OAM swap and
    the prism phases.  Wave plates flip the polarization, the reversal
    permutation turns the folded inverse pass into the second transform,
    and one-port splitters plus mirrors reverse the beams.  The return pass
    (vertical) reuses the path transform, the regrouping and the sorter
    trees backward — the sorters then run forward-as-built, fanning the
    final OAM back out across paths — and exits through the entry
    splitters' reflection onto all dim output paths at OAM 0.
    """
    cfg = SchemeConfig.create(dim, "pol_path_enhanced")
    n = cfg.d_major
    all_paths = list(range(dim))
    fan_paths = list(range(n))
    stages: list[Stage] = [
        Stage("entry-splitter", tuple(PolarizingBeamSplitter(q) for q in all_paths))
    ]
    collect_lo = len(stages)
    groups = [[n * l + i for i in range(n)] for l in range(n)]
    stages += grouped_sorter_stages(n, 1, groups, inverse=True, label="collect")
    stages.append(
        Stage("regroup", (complete_permutation({n * l: l for l in range(n)}),))
    )
    stages += path_fourier_stages(fan_paths, label="pf")
    pf_hi = len(stages)
    stages.append(
        Stage(
            "swap-back",
            (SwapBlock(n, n, 1, tuple(fan_paths), tuple(fan_paths)),),
            direction=BACKWARD,
        )
    )
    stages += cz_stages(n, dim, fan_paths, angle_step=math.pi / dim)
    stages.append(Stage("rotate-pol", tuple(HalfWavePlate(p) for p in fan_paths)))
    stages.append(Stage("reversal-perm", (f_squared_permutation(n, fan_paths),)))
    stages.append(Stage("turn-splitter", tuple(PolarizingBeamSplitter(p) for p in fan_paths)))
    stages.append(Stage("turn-mirror", tuple(Mirror(p) for p in fan_paths)))
    stages += fold_back(stages, collect_lo, pf_hi)
    stages.append(stages[0].reversed_reuse(0))
    stages.append(Stage("exit-mirror", tuple(Mirror(q) for q in all_paths)))
    return Netlist(
        dim=dim,
        variant="pol_path_enhanced",
        d_major=n,
        d_minor=n,
        path_count=dim,
        stages=tuple(stages),
        inputs=tuple(Mode(0, q, "H") for q in range(dim)),
        outputs=tuple(Mode(0, r, "V") for r in range(dim)),
    )


_BUILDERS = {
    "basic": build_basic_scheme,
    "pol_enhanced": build_pol_enhanced_scheme,
    "path_enhanced": build_path_enhanced_scheme,
    "pol_path_enhanced": build_pol_path_enhanced_scheme,
}


def build_scheme(dim: int, variant: str = "basic") -> Netlist:
    """Build the transform circuit for ``dim`` in the chosen variant."""
    if variant not in _BUILDERS:
        raise SchemeParameterError(
            f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}"
        )
    return _BUILDERS[variant](dim)


# --- element-count reporting -----------------------------------------------------


@dataclass(frozen=True)
class CountRow:
    """One element-count entry: how many of a kind a circuit needs."""

    dim: int
    variant: str
    element_kind: str
    count: int
    source: str


@dataclass(frozen=True)
class CountReport:
    """Ordered collection of count rows with CSV export."""

    rows: tuple[CountRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def total(self, element_kind: str) -> int:
        return sum(r.count for r in self.rows if r.element_kind == element_kind)

    def merged(self, other: "CountReport") -> "CountReport":
        return CountReport(self.rows + other.rows)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["d", "variant", "element_kind", "count", "source"])
        for r in self.rows:
            writer.writerow([r.dim, r.variant, r.element_kind, r.count, r.source])
        return out.getvalue()


def count_closed_form(config: SchemeConfig) -> CountReport:
    """Element counts of a circuit from the closed-form census.

    Splitter totals exist for every variant; the per-kind breakdown
    (prisms, shifters, phases, mirrors) is tabulated for the basic layout
    with a genuine two-factor split (dim ≥ 4).
    """
    d, variant = config.dim, config.variant
    rows: list[CountRow] = []

    def add(kind: str, count: int) -> None:
        rows.append(CountRow(d, variant, kind, count, "closed_form"))

    if variant == "basic":
        add("beam_splitter", counts.basic_bs_total(config.d_major, config.d_minor))
        if d >= 4:
            add("dove_prism", counts.basic_dove_total(config.d_major, config.d_minor))
            add("hologram", counts.basic_hologram_total(config.d_major, config.d_minor))
            add("phase_shifter", counts.basic_phase_total(config.d_major, config.d_minor))
            add("mirror", counts.basic_mirror_total(config.d_major, config.d_minor))
    elif variant == "pol_enhanced":
        add("beam_splitter", counts.pol_bs_total(config.d_major))
        add("polarizing_beam_splitter", counts.pol_pbs_total(config.d_major))
        add("half_wave_plate", config.d_major)
    elif variant == "path_enhanced":
        add("beam_splitter", counts.path_bs_total(config.d_major, config.d_minor))
    else:
        add("beam_splitter", counts.pol_path_bs_total(config.d_major))
        add("polarizing_beam_splitter", counts.pol_path_pbs_total(d, config.d_major))
        add("half_wave_plate", config.d_major)
    return CountReport(tuple(rows))


def structural_counts(netlist: Netlist) -> CountReport:
    """Splitter totals read off an actual netlist (composites expanded)."""
    rows = [
        CountRow(
            netlist.dim, netlist.variant, "beam_splitter",
            netlist.beam_splitter_total(), "structural",
        )
    ]
    pbs = netlist.pbs_total()
    if pbs:
        rows.append(
            CountRow(netlist.dim, netlist.variant, "polarizing_beam_splitter", pbs, "structural")
        )
    return CountReport(tuple(rows))
