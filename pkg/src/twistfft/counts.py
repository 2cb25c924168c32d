"""Closed-form element-count formulas for the synthesized circuits.

All formulas are exact integer arithmetic over power-of-two dimensions.
``beam splitter count`` for a block means the number of two-port splitters
its structural expansion contains; composite elements contribute their
interior splitters (an exchanger holds two, a holo-splitter one).
"""

from __future__ import annotations

from .modespace import require_power_of_two


def log2(n: int) -> int:
    return require_power_of_two(n)


def sorter_bs_count(dim: int) -> int:
    """Splitters in a radix-two sorter of the given dimension: 2(dim − 1)."""
    require_power_of_two(dim, "sorter dimension")
    return 2 * (dim - 1)


def path_fourier_bs_count(dim: int) -> int:
    """Splitters in the path-only transform: (dim/2)·log₂(dim)."""
    m = require_power_of_two(dim, "path transform dimension")
    return (dim // 2) * m


def swap_bs_count(dim_in: int, dim_out: int) -> int:
    """Splitters a swap block costs, from its interior exchanger/holo layers.

    Symmetric in its arguments; with ``a = max`` and ``b = min``:
    ``a·log₂(a)/2 + b·log₂(b) + a − 2b + 1``.
    """
    require_power_of_two(dim_in, "swap dimension")
    require_power_of_two(dim_out, "swap dimension")
    big, small = max(dim_in, dim_out), min(dim_in, dim_out)
    return big * log2(big) // 2 + small * log2(small) + big - 2 * small + 1


def swap_exchanger_count(dim_in: int, dim_out: int) -> int:
    """Interior exchangers of a swap block: b·log₂(b)/2 + a − b."""
    big, small = max(dim_in, dim_out), min(dim_in, dim_out)
    return small * log2(small) // 2 + big - small


def swap_holo_bs_count(dim_in: int, dim_out: int) -> int:
    """Interior holo-splitters of a swap block: a·log₂(a)/2 − a + 1."""
    big, small = max(dim_in, dim_out), min(dim_in, dim_out)
    return big * log2(big) // 2 - big + 1


def basic_bs_total(d_major: int, d_minor: int) -> int:
    """Splitter total of the full transform, general two-factor layout.

    The d = 2 circuit uses a shorter special-case layout costing 5.
    """
    dim = d_major * d_minor
    if dim == 2:
        return 5
    return (
        sorter_bs_count(d_major)
        + path_fourier_bs_count(d_major)
        + sorter_bs_count(d_minor)
        + path_fourier_bs_count(d_minor)
        + 3 * swap_bs_count(d_major, d_minor)
    )


def pol_bs_total(side: int) -> int:
    """Splitters in the polarization-folded layout on factor ``side`` = √d."""
    return (
        sorter_bs_count(side)
        + path_fourier_bs_count(side)
        + 2 * swap_bs_count(side, side)
    )


def pol_pbs_total(side: int) -> int:
    """Polarizing splitters in the polarization-folded layout: side + 1."""
    return side + 1


def path_bs_total(d_major: int, d_minor: int) -> int:
    """Splitters in the all-path layout (d single-OAM input ports)."""
    return (
        d_minor * sorter_bs_count(d_major)
        + path_fourier_bs_count(d_major)
        + d_major * sorter_bs_count(d_minor)
        + path_fourier_bs_count(d_minor)
        + swap_bs_count(d_major, d_minor)
    )


def pol_path_bs_total(side: int) -> int:
    """Splitters in the polarization-folded all-path layout on √d paths²."""
    return (
        side * sorter_bs_count(side)
        + path_fourier_bs_count(side)
        + swap_bs_count(side, side)
    )


def pol_path_pbs_total(dim: int, side: int) -> int:
    """Polarizing splitters in the folded all-path layout: d + √d."""
    return dim + side


# Per-kind closed forms for the general two-factor layout (dim ≥ 4).  These
# follow a specific reference realization of the interior optics; the
# structural netlists built here agree with them on splitter counts but may
# arrange phases and mirrors differently.


def basic_dove_total(d_major: int, d_minor: int) -> int:
    return 3 * d_minor * log2(d_minor) + 9 * d_major - 4 * d_minor - 5


def basic_hologram_total(d_major: int, d_minor: int) -> int:
    return (
        3 * d_major * log2(d_major)
        + 3 * d_minor * log2(d_minor)
        + 2 * d_major
        - 4 * d_minor
        + 2
    )


def basic_phase_total(d_major: int, d_minor: int) -> int:
    return (
        5 * d_major * log2(d_major)
        + d_minor * log2(d_minor) // 2
        - 10 * d_major
        - d_minor
        + 11
    )


def basic_mirror_total(d_major: int, d_minor: int) -> int:
    return (
        7 * d_major * log2(d_major)
        + 4 * d_minor * log2(d_minor)
        - 8 * d_major
        + 11 * d_minor
        - 3
    )


# Literature baselines for the scaling comparison table.


def semi_brute_force_bs(dim: int) -> int:
    """Sort-then-transform baseline: one sorter plus a path transform."""
    return sorter_bs_count(dim) + path_fourier_bs_count(dim)


def recursive_design_bs(dim: int) -> float:
    """Reported asymptotic cost of the best known recursive OAM design."""
    return 6.1412 * dim


def traditional_path_bs(dim: int) -> int:
    """Path-encoded transform alone (inputs already on separate paths)."""
    return path_fourier_bs_count(dim)
