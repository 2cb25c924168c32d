"""Composite circuit blocks: sorters, swaps, path transforms, phase arrays.

Each block comes as a list of stages (for splicing into larger schemes) plus
a standalone netlist builder.  The structural expansions are exact: on their
contract domains every route amplitude that should be 1 is exactly 1, so
stacking blocks never accumulates correction phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import counts
from .elements import (
    BACKWARD,
    FORWARD,
    BeamSplitter,
    DovePrism,
    Element,
    Exchanger,
    HoloBeamSplitter,
    Mirror,
    PathPermutation,
    PhaseShifter,
    SorterContract,
    SwapBlock,
    Superposition,
)
from .modespace import Mode, require_power_of_two
from .netlist import Netlist, Stage

# --- free-function views of the two composite elements -----------------------


def exchanger_action(
    order: int,
    mode: Mode,
    direction: str = FORWARD,
    path_a: int = 0,
    path_b: int = 1,
) -> Superposition:
    """Transfer rule of an exchanger of the given order, on two paths.

    Convenience wrapper over the :class:`~twistfft.elements.Exchanger`
    element for contract tests and quick exploration.
    """
    return Exchanger(path_a, path_b, order).act(mode, direction)


def holo_bs_action(
    ratio_index: float,
    order: int,
    mode: Mode,
    direction: str = FORWARD,
    path_a: int = 0,
    path_b: int = 1,
) -> Superposition:
    """Transfer rule of a holo-splitter with mixing index ``ratio_index``."""
    return HoloBeamSplitter(path_a, path_b, ratio_index, order).act(mode, direction)


# --- small structural helpers -------------------------------------------------


def inverted_stages(stages: Sequence[Stage]) -> list[Stage]:
    """Fresh copies of ``stages`` in reverse order, traversed the other way."""
    flipped = []
    for stage in reversed(stages):
        direction = BACKWARD if stage.direction == FORWARD else FORWARD
        flipped.append(Stage(stage.label + "~", stage.elements, direction))
    return flipped


def fold_back(stages: Sequence[Stage], lo: int, hi: int) -> list[Stage]:
    """Return-leg traversal of stages[lo:hi]: same hardware, reversed order,
    opposite direction, each tagged with the stage it reuses."""
    return [stages[i].reversed_reuse(i) for i in reversed(range(lo, hi))]


def complete_permutation(pairs: Mapping[int, int]) -> PathPermutation:
    """Close a partial path mapping into a permutation.

    The domain is the union of the given sources and targets; unassigned
    sources map onto unassigned targets in ascending order on both sides,
    which makes the completion canonical (two calls with equal pairs give
    equal permutations).
    """
    explicit = {int(s): int(t) for s, t in pairs.items()}
    domain = set(explicit) | set(explicit.values())
    free_sources = sorted(domain - set(explicit))
    free_targets = sorted(domain - set(explicit.values()))
    table = dict(explicit)
    table.update(zip(free_sources, free_targets))
    return PathPermutation(tuple(table.items()))


# --- radix-two sorter -----------------------------------------------------------


def grouped_sorter_stages(
    dim: int,
    oam_step: int,
    groups: Sequence[Sequence[int]],
    inverse: bool = False,
    label: str = "sort",
) -> list[Stage]:
    """Sorter levels for several disjoint path groups, merged level-wise.

    Level ℓ carries exchangers of order ``oam_step·2^ℓ`` between paths
    ``group[t]`` and ``group[t + 2^ℓ]``; the interleaving between levels is
    absorbed into this wiring, so a mode of index k exits directly on the
    group's path ``k mod dim`` with its OAM reduced to a multiple of
    ``oam_step·dim``.  Inverse sorters run the levels in reverse order,
    backward.
    """
    depth = require_power_of_two(dim, "sorter dimension")
    for g in groups:
        if len(g) != dim:
            raise ValueError(f"sorter group {g!r} does not have {dim} paths")
    stages = []
    for level in range(depth):
        block = 1 << level
        elements: list[Element] = []
        for g in groups:
            elements.extend(
                Exchanger(g[t], g[t + block], oam_step * block) for t in range(block)
            )
        stages.append(Stage(f"{label}/level{level}", tuple(elements)))
    if inverse:
        stages = inverted_stages(stages)
    return stages


def sorter_stages(
    dim: int,
    oam_step: int = 1,
    paths: Sequence[int] | None = None,
    inverse: bool = False,
    label: str = "sort",
) -> list[Stage]:
    """Single-group radix-two sorter levels (see grouped_sorter_stages)."""
    paths = list(range(dim)) if paths is None else list(paths)
    return grouped_sorter_stages(dim, oam_step, [paths], inverse=inverse, label=label)


@dataclass(frozen=True)
class SorterBuild:
    """Structural netlist of a sorter plus its behavioral contract element."""

    netlist: Netlist
    contract: SorterContract


def build_sorter(
    dim: int,
    oam_step: int = 1,
    inverse: bool = False,
    paths: Sequence[int] | None = None,
) -> SorterBuild:
    """Radix-two OAM sorter over ``dim`` paths.

    Forward contract, for any integer k: ``|oam_step·k⟩`` on the root path
    exits on path ``k mod dim`` carrying ``|oam_step·dim·⌊k/dim⌋⟩``, with
    amplitude exactly 1.  The inverse build runs the same tree backward.
    Declared inputs/outputs cover one index period.
    """
    paths = list(range(dim)) if paths is None else list(paths)
    stages = sorter_stages(dim, oam_step, paths, inverse=inverse)
    root = paths[0]
    fan = [Mode(0, paths[r]) for r in range(dim)]
    spine = [Mode(oam_step * k, root) for k in range(dim)]
    netlist = Netlist(
        dim=dim,
        variant="sorter_inverse" if inverse else "sorter",
        d_major=dim,
        d_minor=1,
        path_count=max(paths) + 1,
        stages=tuple(stages),
        inputs=tuple(fan if inverse else spine),
        outputs=tuple(spine if inverse else fan),
    )
    return SorterBuild(netlist, SorterContract(dim, oam_step, tuple(paths)))


# --- behavioral swap --------------------------------------------------------------


@dataclass(frozen=True)
class SwapBuild:
    """Behavioral swap netlist plus its block element and splitter cost."""

    netlist: Netlist
    block: SwapBlock
    beam_splitter_count: int


def build_swap(
    dim_in: int,
    dim_out: int,
    oam_step: int = 1,
    inverse: bool = False,
    in_paths: Sequence[int] | None = None,
    out_paths: Sequence[int] | None = None,
) -> SwapBuild:
    """OAM↔path exchange block with its closed-form splitter cost.

    The block is behavioral (an exact permutation of mode labels); its
    splitter cost comes from the closed-form interior census.  ``inverse``
    returns a netlist that traverses the block backward.
    """
    in_paths = tuple(range(dim_in)) if in_paths is None else tuple(in_paths)
    out_paths = tuple(in_paths[:dim_out]) if out_paths is None else tuple(out_paths)
    block = SwapBlock(dim_in, dim_out, oam_step, in_paths, out_paths)
    stage = Stage("swap", (block,), direction=BACKWARD if inverse else FORWARD)
    step = oam_step * (dim_in // dim_out)
    fore = [Mode(step * k, in_paths[p]) for k in range(dim_out) for p in range(dim_in)]
    aft = [Mode(oam_step * p, out_paths[k]) for p in range(dim_in) for k in range(dim_out)]
    back_fore = [Mode(oam_step * k, out_paths[p]) for k in range(dim_in) for p in range(dim_out)]
    back_aft = [Mode(step * p, in_paths[k]) for p in range(dim_out) for k in range(dim_in)]
    netlist = Netlist(
        dim=dim_in * dim_out,
        variant="swap_inverse" if inverse else "swap",
        d_major=dim_in * dim_out,
        d_minor=1,
        path_count=max(max(in_paths), max(out_paths)) + 1,
        stages=(stage,),
        inputs=tuple(back_fore if inverse else fore),
        outputs=tuple(back_aft if inverse else aft),
    )
    return SwapBuild(netlist, block, counts.swap_bs_count(dim_in, dim_out))


# --- path-only Fourier transform ----------------------------------------------------


def path_fourier_stages(paths: Sequence[int], label: str = "pf") -> list[Stage]:
    """Recursive splitter network for the Fourier transform over paths.

    Radix-two decimation: a parity relabeling feeds two half-size
    transforms (their stages run side by side), a phase stage applies the
    interleaving twiddles, and a rank of two-path combiners merges the
    halves.  Each combiner is a splitter bracketed by half-turn phases and
    mirrors on its second path, which keeps the OAM label untouched:
    amplitudes realize the unitary (|a⟩+|b⟩, |a⟩−|b⟩)/√2 exactly.
    """
    paths = list(paths)
    n = len(paths)
    if n == 1:
        return []
    if n & (n - 1):
        raise ValueError(f"path transform needs a power-of-two port count, got {n}")
    stages: list[Stage] = []
    half = n // 2
    if n > 2:
        mapping = {paths[p]: paths[(p % 2) * half + p // 2] for p in range(n)}
        stages.append(Stage(f"{label}/parity{n}", (PathPermutation(tuple(mapping.items())),)))
        top = path_fourier_stages(paths[:half], label=f"{label}/even{half}")
        bottom = path_fourier_stages(paths[half:], label=f"{label}/odd{half}")
        # The two half transforms occupy disjoint paths: run them in lockstep.
        for a, b in zip(top, bottom):
            stages.append(Stage(a.label, a.elements + b.elements, a.direction))
        twiddles = tuple(
            PhaseShifter(paths[half + j], 2.0 * math.pi * j / n) for j in range(1, half)
        )
        if twiddles:
            stages.append(Stage(f"{label}/twiddle{n}", twiddles))
    pairs = [(paths[j], paths[j + half]) for j in range(half)]
    stages.append(
        Stage(f"{label}/merge{n}-flip-in", tuple(PhaseShifter(b, math.pi) for _, b in pairs))
    )
    stages.append(Stage(f"{label}/merge{n}-turn-in", tuple(Mirror(b) for _, b in pairs)))
    stages.append(Stage(f"{label}/merge{n}-split", tuple(BeamSplitter(a, b) for a, b in pairs)))
    stages.append(Stage(f"{label}/merge{n}-turn-out", tuple(Mirror(b) for _, b in pairs)))
    stages.append(
        Stage(f"{label}/merge{n}-flip-out", tuple(PhaseShifter(b, math.pi) for _, b in pairs))
    )
    return stages


def build_path_fourier(dim: int, inverse: bool = False, paths: Sequence[int] | None = None) -> Netlist:
    """Fourier transform over ``dim`` paths at fixed OAM (structural)."""
    require_power_of_two(dim, "path transform dimension")
    paths = list(range(dim)) if paths is None else list(paths)
    stages = path_fourier_stages(paths)
    if inverse:
        stages = inverted_stages(stages)
    ports = tuple(Mode(0, p) for p in paths)
    return Netlist(
        dim=dim,
        variant="path_fourier_inverse" if inverse else "path_fourier",
        d_major=dim,
        d_minor=1,
        path_count=max(paths) + 1 if paths else 1,
        stages=tuple(stages),
        inputs=ports,
        outputs=ports,
    )


# --- controlled-phase array and reversal permutation ---------------------------------


def cz_stages(
    d_major: int,
    dim: int,
    paths: Sequence[int] | None = None,
    angle_step: float | None = None,
    label: str = "cz",
) -> list[Stage]:
    """Per-path OAM-proportional phases via prism+mirror pairs.

    Path ``k`` (for k ≥ 1) carries a Dove prism rotated by ``k·angle_step``
    followed by a mirror; on a mode of OAM m the pair multiplies by exactly
    ``exp(2i·k·angle_step·m)`` — the prism's reflection and sign are undone
    by the mirror.  Path 0 stays empty (zero phase).  The default step
    π/(d_major·dim) makes the phase ``exp(2πi·j·k/dim)`` on the scheme's
    intermediate OAM labels m = d_major·j.
    """
    paths = list(range(d_major)) if paths is None else list(paths)
    if angle_step is None:
        angle_step = math.pi / (d_major * dim)
    doves = tuple(DovePrism(paths[k], k * angle_step) for k in range(1, d_major))
    if not doves:
        return []
    mirrors = tuple(Mirror(paths[k]) for k in range(1, d_major))
    return [Stage(f"{label}/prism", doves), Stage(f"{label}/mirror", mirrors)]


def build_cz_array(
    d_major: int,
    dim: int,
    paths: Sequence[int] | None = None,
    angle_step: float | None = None,
) -> Netlist:
    """Standalone netlist for the controlled-phase array."""
    require_power_of_two(d_major, "phase-array path count")
    require_power_of_two(dim, "dimension")
    if dim % d_major:
        raise ValueError(f"path count {d_major} must divide the dimension {dim}")
    paths = list(range(d_major)) if paths is None else list(paths)
    stages = cz_stages(d_major, dim, paths, angle_step)
    ports = tuple(Mode(0, p) for p in paths)
    return Netlist(
        dim=dim,
        variant="cz_array",
        d_major=d_major,
        d_minor=dim // d_major,
        path_count=max(paths) + 1,
        stages=tuple(stages),
        inputs=ports,
        outputs=ports,
    )


def f_squared_permutation(d_major: int, paths: Sequence[int] | None = None) -> PathPermutation:
    """The squared-transform relabeling: path 0 fixed, p ↔ d_major − p."""
    paths = list(range(d_major)) if paths is None else list(paths)
    if len(paths) != d_major:
        raise ValueError(f"need {d_major} paths, got {len(paths)}")
    mapping = {paths[0]: paths[0]}
    for p in range(1, d_major):
        mapping[paths[p]] = paths[d_major - p]
    return PathPermutation(tuple(mapping.items()))


def build_f_squared_perm(d_major: int, paths: Sequence[int] | None = None) -> Netlist:
    """Standalone netlist for the squared-transform relabeling."""
    require_power_of_two(d_major, "permutation size")
    paths = list(range(d_major)) if paths is None else list(paths)
    stage = Stage("reversal-perm", (f_squared_permutation(d_major, paths),))
    ports = tuple(Mode(0, p) for p in paths)
    return Netlist(
        dim=d_major,
        variant="f_squared_permutation",
        d_major=d_major,
        d_minor=1,
        path_count=max(paths) + 1,
        stages=(stage,),
        inputs=ports,
        outputs=ports,
    )
