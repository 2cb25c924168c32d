"""Verification oracles, distance measures, loss curves and scaling tables.

The functions here never trust the synthesis code: the reference transform
matrix is constructed directly from its definition, and circuit operators
are compared against it entry by entry after global-phase alignment.
"""

from __future__ import annotations

import csv
import io
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import counts
from .elements import LossModel
from .modespace import Mode, ModeBasis, ModeOperator
from .netlist import Netlist, operator_of
from .synthesis import (
    VARIANTS,
    SchemeConfig,
    build_basic_scheme,
    build_scheme,
    count_closed_form,
)

_BASELINES = (
    ("semi_brute_force", counts.semi_brute_force_bs),
    ("recursive_design", counts.recursive_design_bs),
    ("traditional_path", counts.traditional_path_bs),
)


def dft_oracle(dim: int) -> np.ndarray:
    """Reference transform matrix, built directly from its definition.

    Entry (j, k) is ``exp(+2πi·jk/dim)/√dim``; the matrix is unitary and
    symmetric.  This is the ground truth every circuit is verified against.
    """
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ValueError(f"dimension must be a positive integer, got {dim!r}")
    j, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    return np.exp(2j * np.pi * j * k / dim) / math.sqrt(dim)


def _as_matrix(operator) -> np.ndarray:
    if isinstance(operator, ModeOperator):
        return operator.matrix
    return np.asarray(operator, dtype=complex)


def global_phase_alignment(candidate, reference) -> tuple[complex, float]:
    """Best unit phase c and the max-entry distance |candidate − c·reference|.

    The optimal c for the trace overlap is ``Tr(ref† cand)`` normalized to
    unit modulus.  If the overlap vanishes (trace-orthogonal matrices) no
    alignment exists; a warning is raised and c = 1 is used.
    """
    a = _as_matrix(candidate)
    b = _as_matrix(reference)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    overlap = complex(np.trace(b.conj().T @ a))
    if abs(overlap) < 1e-12:
        warnings.warn(
            "matrices have (near-)zero trace overlap; no global phase alignment exists",
            stacklevel=2,
        )
        return 1.0 + 0j, float(np.abs(a - b).max())
    phase = overlap / abs(overlap)
    return phase, float(np.abs(a - phase * b).max())


def phase_aligned_distance(candidate, reference) -> float:
    """Max-entry distance between matrices after global-phase alignment."""
    return global_phase_alignment(candidate, reference)[1]


def expected_operator_matrix(
    netlist: Netlist, basis_in: ModeBasis, basis_out: ModeBasis
) -> np.ndarray:
    """The reference transform laid out on a simulation's bases.

    The netlist's declared input/output orders define which transform index
    each mode carries; modes outside the declared outputs get expected
    amplitude zero, so stray leakage shows up as deviation.
    """
    oracle = dft_oracle(netlist.dim)
    in_pos = {mode: idx for idx, mode in enumerate(netlist.inputs)}
    out_pos = {mode: idx for idx, mode in enumerate(netlist.outputs)}
    expected = np.zeros((len(basis_out), len(basis_in)), dtype=complex)
    for col, mode_in in enumerate(basis_in):
        q = in_pos.get(mode_in)
        if q is None:
            raise ValueError(f"simulated input {mode_in} is not a declared input")
        for row, mode_out in enumerate(basis_out):
            r = out_pos.get(mode_out)
            if r is not None:
                expected[row, col] = oracle[r, q]
    return expected


# --- full-circuit verification ------------------------------------------------


@dataclass(frozen=True)
class VerificationCheck:
    """One named pass/fail item inside a verification report."""

    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of simulating a netlist against the reference transform."""

    dim: int
    variant: str
    tolerance: float
    basis_size: int
    max_deviation: float
    global_phase: complex
    unitarity_residual: float
    checks: tuple[VerificationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def summary_lines(self) -> list[str]:
        lines = [
            f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}" for c in self.checks
        ]
        lines.append(
            f"{'PASS' if self.passed else 'FAIL'}: dim={self.dim} variant={self.variant} "
            f"max_deviation={self.max_deviation:.3e} tolerance={self.tolerance:.1e}"
        )
        return lines

    def to_document(self) -> dict:
        return {
            "dim": self.dim,
            "variant": self.variant,
            "tolerance": self.tolerance,
            "basis_size": self.basis_size,
            "max_deviation": self.max_deviation,
            "global_phase": {
                "re": self.global_phase.real,
                "im": self.global_phase.imag,
                "angle": math.atan2(self.global_phase.imag, self.global_phase.real),
            },
            "unitarity_residual": self.unitarity_residual,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks
            ],
            "passed": self.passed,
        }


def verify_netlist(
    netlist: Netlist,
    tolerance: float = 1e-9,
    closure_cap: int = 10**6,
    subspace_offsets: Sequence[int] = (),
) -> VerificationReport:
    """Simulate a netlist and compare it against the reference transform.

    Checks, in order: the declared ports cover exactly ``dim`` modes each;
    the simulated output modes coincide with the declared outputs; the
    operator equals the reference matrix up to one global phase within
    ``tolerance``; the operator is unitary.  ``subspace_offsets`` appends
    OAM-block checks (see :func:`subspace_phase_check`) — meaningful for
    the OAM-ladder variants.
    """
    checks: list[VerificationCheck] = []
    dim = netlist.dim
    ins, outs = netlist.inputs, netlist.outputs
    ports_ok = (
        len(ins) == dim == len(outs)
        and len(set(ins)) == dim
        and len(set(outs)) == dim
    )
    checks.append(
        VerificationCheck(
            "declared_ports",
            ports_ok,
            f"{len(ins)} inputs / {len(outs)} outputs declared for dim {dim}",
        )
    )
    op = operator_of(netlist, closure_cap=closure_cap)
    stray = set(op.basis_out.modes) - set(outs)
    missing = set(outs) - set(op.basis_out.modes)
    closure_ok = not stray and not missing
    detail = f"simulated output modes = declared outputs ({len(op.basis_out)} modes)"
    if not closure_ok:
        shown = ", ".join(str(m) for m in sorted(stray | missing, key=Mode.sort_key)[:4])
        detail = f"{len(stray)} stray / {len(missing)} missing output modes (e.g. {shown})"
    checks.append(VerificationCheck("output_modes", closure_ok, detail))

    expected = expected_operator_matrix(netlist, op.basis_in, op.basis_out)
    phase, deviation = global_phase_alignment(op.matrix, expected)
    checks.append(
        VerificationCheck(
            "transform_matrix",
            deviation <= tolerance,
            f"max deviation {deviation:.3e} after phase alignment (phase angle "
            f"{math.atan2(phase.imag, phase.real):+.3e} rad)",
        )
    )
    residual = op.unitarity_residual
    checks.append(
        VerificationCheck("unitarity", residual <= tolerance, f"max |U†U − 1| = {residual:.3e}")
    )
    for offset in subspace_offsets:
        sub = subspace_phase_check(
            dim, offset, netlist=netlist, tolerance=tolerance, closure_cap=closure_cap
        )
        checks.append(
            VerificationCheck(
                f"oam_block_offset_{offset}",
                sub.passed,
                f"phase deviation {sub.max_phase_deviation:.3e}, "
                f"shape residual {sub.max_residual:.3e}"
                + (", phase-free block" if sub.phase_free else ""),
            )
        )
    return VerificationReport(
        dim=dim,
        variant=netlist.variant,
        tolerance=tolerance,
        basis_size=len(op.basis_out),
        max_deviation=deviation,
        global_phase=phase,
        unitarity_residual=residual,
        checks=tuple(checks),
    )


# --- OAM-block structure ------------------------------------------------------------


@dataclass(frozen=True)
class SubspaceReport:
    """Behavior of a circuit on the OAM block shifted by ``offset·dim``.

    The circuit acts on each block as the reference transform times one
    phase per input column: column k picks up
    ``exp(2πi·(k mod d_major)·offset/d_major)``.  Blocks whose offset is a
    multiple of d_major are phase-free — the circuit transforms them
    identically, which is what makes parallel multi-block operation work.
    """

    dim: int
    offset: int
    d_major: int
    phase_free: bool
    tolerance: float
    prefactors: tuple[complex, ...]
    expected_prefactors: tuple[complex, ...]
    max_phase_deviation: float
    max_residual: float

    @property
    def passed(self) -> bool:
        return (
            self.max_phase_deviation <= self.tolerance
            and self.max_residual <= self.tolerance
        )


def subspace_phase_check(
    dim: int,
    offset: int,
    netlist: Netlist | None = None,
    tolerance: float = 1e-9,
    closure_cap: int = 10**6,
) -> SubspaceReport:
    """Check how a circuit transforms the OAM block at ``offset·dim``.

    Feeds the declared inputs shifted by ``offset·dim`` in OAM and projects
    each output column onto the matching reference column.  The report
    carries the measured per-column prefactors, their predicted values, and
    the residual shape error after dividing the prefactor out.
    """
    netlist = build_basic_scheme(dim) if netlist is None else netlist
    shift = offset * dim
    shifted_in = [Mode(m.oam + shift, m.path, m.pol) for m in netlist.inputs]
    shifted_out = [Mode(m.oam + shift, m.path, m.pol) for m in netlist.outputs]
    op = operator_of(netlist, inputs=shifted_in, closure_cap=closure_cap)
    oracle = dft_oracle(dim)
    row_of = {}
    for j, mode in enumerate(shifted_out):
        if mode in op.basis_out:
            row_of[op.basis_out.index(mode)] = j

    prefactors = []
    expected = []
    max_phase_dev = 0.0
    max_residual = 0.0
    d_major = netlist.d_major
    for k, mode in enumerate(shifted_in):
        col = op.basis_in.index(mode)
        column = op.matrix[:, col]
        # Projection onto the reference column isolates the block prefactor.
        pref = complex(
            sum(np.conj(oracle[j, k]) * column[row] for row, j in row_of.items())
        )
        want = complex(np.exp(2j * np.pi * (k % d_major) * offset / d_major))
        prefactors.append(pref)
        expected.append(want)
        max_phase_dev = max(max_phase_dev, abs(pref - want))
        model = np.zeros_like(column)
        for row, j in row_of.items():
            model[row] = pref * oracle[j, k]
        max_residual = max(max_residual, float(np.abs(column - model).max()))
    return SubspaceReport(
        dim=dim,
        offset=offset,
        d_major=d_major,
        phase_free=offset % d_major == 0,
        tolerance=tolerance,
        prefactors=tuple(prefactors),
        expected_prefactors=tuple(expected),
        max_phase_deviation=max_phase_dev,
        max_residual=max_residual,
    )


@dataclass(frozen=True)
class ParallelReport:
    """Joint transform of two phase-free OAM blocks in one pass."""

    dim: int
    offsets: tuple[int, int]
    seed: int | None
    tolerance: float
    max_deviation: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def parallel_dataset_check(
    dim: int = 4,
    seed: int | None = None,
    netlist: Netlist | None = None,
    tolerance: float = 1e-9,
    closure_cap: int = 10**6,
) -> ParallelReport:
    """Transform a random state spanning two phase-free blocks at once.

    Blocks at offsets 0 and d_major both transform without a prefactor, so
    a joint random superposition over both must map exactly under the
    block-diagonal reference transform.  This is the parallelism check: two
    independent vectors ride through the same circuit simultaneously.
    """
    netlist = build_basic_scheme(dim) if netlist is None else netlist
    offsets = (0, netlist.d_major)
    inputs: list[Mode] = []
    for offset in offsets:
        shift = offset * dim
        inputs.extend(Mode(m.oam + shift, m.path, m.pol) for m in netlist.inputs)
    rng = np.random.default_rng(seed)
    vec = rng.normal(size=len(inputs)) + 1j * rng.normal(size=len(inputs))
    vec /= np.linalg.norm(vec)

    op = operator_of(netlist, inputs=inputs, closure_cap=closure_cap)
    coeff = {mode: vec[i] for i, mode in enumerate(inputs)}
    in_vec = np.array([coeff[m] for m in op.basis_in], dtype=complex)
    out_vec = op.matrix @ in_vec

    oracle = dft_oracle(dim)
    expected: dict[Mode, complex] = {}
    for offset in offsets:
        shift = offset * dim
        for k, mode_in in enumerate(netlist.inputs):
            c = coeff[Mode(mode_in.oam + shift, mode_in.path, mode_in.pol)]
            for j, mode_out in enumerate(netlist.outputs):
                target = Mode(mode_out.oam + shift, mode_out.path, mode_out.pol)
                expected[target] = expected.get(target, 0j) + c * oracle[j, k]
    model = np.array([expected.get(m, 0j) for m in op.basis_out], dtype=complex)
    deviation = float(np.abs(out_vec - model).max())
    return ParallelReport(
        dim=dim,
        offsets=offsets,
        seed=seed,
        tolerance=tolerance,
        max_deviation=deviation,
    )


# --- loss model ---------------------------------------------------------------------


def normalized_fidelity(measured, target) -> float:
    """Scale-invariant overlap |Tr(target† measured)|² / (n·Tr(measured† measured)).

    Equals 1 exactly when ``measured`` is any nonzero scalar multiple of a
    unitary ``target`` — uniform attenuation does not degrade it.  Values
    below 1 measure genuine shape distortion (route-dependent loss).
    """
    m = _as_matrix(measured)
    u = _as_matrix(target)
    if m.shape != u.shape:
        raise ValueError(f"shape mismatch: {m.shape} vs {u.shape}")
    power = float(np.trace(m.conj().T @ m).real)
    if power <= 0.0:
        return 0.0
    overlap = abs(complex(np.trace(u.conj().T @ m)))
    return float(overlap**2 / (m.shape[1] * power))


@dataclass(frozen=True)
class FidelityCurve:
    """Normalized fidelity of one circuit across a transmission grid."""

    dim: int
    variant: str
    hologram_transmission: float
    transmissions: tuple[float, ...]
    fidelities: tuple[float, ...]

    def monotone_violations(self, slack: float = 1e-12) -> tuple[int, ...]:
        """Grid indices where fidelity drops as transmission increases."""
        return tuple(
            i
            for i in range(len(self.fidelities) - 1)
            if self.fidelities[i + 1] < self.fidelities[i] - slack
        )

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["d", "variant", "hologram_transmission", "transmission", "fidelity"])
        for t, f in zip(self.transmissions, self.fidelities):
            writer.writerow([self.dim, self.variant, self.hologram_transmission, t, f])
        return out.getvalue()

    def to_document(self) -> dict:
        return {
            "dim": self.dim,
            "variant": self.variant,
            "hologram_transmission": self.hologram_transmission,
            "transmissions": list(self.transmissions),
            "fidelities": list(self.fidelities),
        }


def _worker_count(jobs: int) -> int:
    env = os.environ.get("TWISTFFT_THREADS", "").strip()
    if env:
        try:
            requested = int(env)
        except ValueError as exc:
            raise ValueError(f"TWISTFFT_THREADS must be an integer, got {env!r}") from exc
        requested = max(1, requested)
    else:
        requested = min(4, os.cpu_count() or 1)
    return max(1, min(requested, jobs))


def loss_sweep(
    dim: int,
    transmissions: Iterable[float],
    hologram_transmission: float = 0.90,
    variant: str = "basic",
    closure_cap: int = 10**6,
) -> FidelityCurve:
    """Normalized fidelity of a circuit over a grid of element transmissions.

    Every non-hologram element kind gets the same intensity transmission
    from the grid; holograms keep their own (worse) transmission, which is
    what makes routes with different hologram counts decohere in amplitude
    and pulls the fidelity below 1.
    """
    grid = tuple(float(t) for t in transmissions)
    netlist = build_scheme(dim, variant)

    def fidelity_at(transmission: float) -> float:
        loss = LossModel.uniform(transmission, hologram=hologram_transmission)
        op = operator_of(netlist, loss_model=loss, closure_cap=closure_cap)
        expected = expected_operator_matrix(netlist, op.basis_in, op.basis_out)
        return normalized_fidelity(op.matrix, expected)

    workers = _worker_count(len(grid)) if grid else 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = tuple(pool.map(fidelity_at, grid))
    else:
        values = tuple(fidelity_at(t) for t in grid)
    return FidelityCurve(
        dim=dim,
        variant=variant,
        hologram_transmission=hologram_transmission,
        transmissions=grid,
        fidelities=values,
    )


# --- element-count scaling -----------------------------------------------------------


@dataclass(frozen=True)
class ScalingRow:
    """Splitter cost of one design (or baseline) at one dimension."""

    m_exponent: int
    dim: int
    variant: str
    beam_splitters: float
    pbs: int
    depth: int | None


@dataclass(frozen=True)
class ScalingTable:
    """Cost-versus-dimension table across variants and reference baselines."""

    rows: tuple[ScalingRow, ...]

    def rows_for(self, variant: str) -> tuple[ScalingRow, ...]:
        return tuple(r for r in self.rows if r.variant == variant)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["M", "d", "variant", "beam_splitters", "pbs", "depth"])
        for r in self.rows:
            writer.writerow(
                [r.m_exponent, r.dim, r.variant, r.beam_splitters, r.pbs,
                 "" if r.depth is None else r.depth]
            )
        return out.getvalue()


def scaling_table(
    m_range: Iterable[int],
    variants: Sequence[str] = VARIANTS,
    include_baselines: bool = True,
    depth_limit: int = 10,
) -> ScalingTable:
    """Splitter totals for each variant across dimensions 2^M.

    Polarization variants appear only at even M.  Circuit depth (stage
    count, return passes included) is measured on actually-built netlists
    up to ``depth_limit`` and left blank beyond.  Baseline rows give the
    reference splitter costs other designs would need at the same size.
    """
    rows: list[ScalingRow] = []
    for m in m_range:
        dim = 1 << m
        for variant in variants:
            if variant in ("pol_enhanced", "pol_path_enhanced") and m % 2:
                continue
            config = SchemeConfig.create(dim, variant)
            report = count_closed_form(config)
            depth = build_scheme(dim, variant).depth if m <= depth_limit else None
            rows.append(
                ScalingRow(
                    m_exponent=m,
                    dim=dim,
                    variant=variant,
                    beam_splitters=report.total("beam_splitter"),
                    pbs=report.total("polarizing_beam_splitter"),
                    depth=depth,
                )
            )
        if include_baselines:
            for name, formula in _BASELINES:
                rows.append(
                    ScalingRow(
                        m_exponent=m,
                        dim=dim,
                        variant=name,
                        beam_splitters=formula(dim),
                        pbs=0,
                        depth=None,
                    )
                )
    return ScalingTable(tuple(rows))
