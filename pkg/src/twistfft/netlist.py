"""Staged optical circuits and their exact simulation.

A netlist is an ordered list of stages; each stage is a set of elements on
disjoint paths, traversed together in a stated direction.  The stage order
is the time order in which light meets the hardware, so folded circuits
simply list the same physical elements again with the opposite direction
and a ``reuse_of`` back-reference (reused stages are excluded from element
counts).

Simulation is frontier-sequential: the set of mode labels that can carry
amplitude is pushed through the stages one by one, and per-input amplitude
vectors follow the same route.  Label propagation ignores amplitude values,
so the basis an operator is expressed in depends only on the circuit's
structure — byte-reproducible across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import counts
from .elements import (
    BACKWARD,
    FORWARD,
    BeamSplitter,
    Element,
    Exchanger,
    HoloBeamSplitter,
    LossModel,
    PolarizingBeamSplitter,
    SorterContract,
    SwapBlock,
    element_from_record,
    element_to_record,
)
from .errors import (
    BasisEscapeError,
    ClosureOverflowError,
    NetlistFormatError,
)
from .modespace import Mode, ModeBasis, ModeOperator

NETLIST_VERSION = "1.0.0"


def _toggled(direction: str) -> str:
    return BACKWARD if direction == FORWARD else FORWARD


@dataclass(frozen=True)
class Stage:
    """One simultaneous rank of elements, traversed in one direction.

    Elements within a stage must sit on pairwise disjoint path sets.
    ``reuse_of`` marks a later traversal of an earlier stage's hardware
    (set by the folded builders); such stages add no new elements to any
    census.
    """

    label: str
    elements: tuple[Element, ...]
    direction: str = FORWARD
    reuse_of: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.direction not in (FORWARD, BACKWARD):
            raise ValueError(f"bad stage direction {self.direction!r}")
        seen: set[int] = set()
        for element in self.elements:
            if not isinstance(element, Element):
                raise TypeError(f"stage {self.label!r} holds a non-element: {element!r}")
            ports = set(element.all_ports)
            if ports & seen:
                raise ValueError(
                    f"stage {self.label!r}: elements overlap on paths {sorted(ports & seen)}"
                )
            seen |= ports

    def port_map(self) -> dict[int, Element]:
        """Path index → the element that owns it (identity elsewhere)."""
        table: dict[int, Element] = {}
        for element in self.elements:
            for port in element.all_ports:
                table[port] = element
        return table

    def reversed_reuse(self, index: int) -> "Stage":
        """The same hardware traversed again the other way (folded return)."""
        return Stage(
            label=f"{self.label}/return",
            elements=self.elements,
            direction=_toggled(self.direction),
            reuse_of=index,
        )


@dataclass(frozen=True)
class Netlist:
    """A complete staged circuit with declared input and output modes.

    ``d_major``/``d_minor`` are the two factor dimensions of the transform
    (for single blocks, the block size and 1).  ``path_count`` is the number
    of physical paths the layout occupies.
    """

    dim: int
    variant: str
    d_major: int
    d_minor: int
    path_count: int
    stages: tuple[Stage, ...]
    inputs: tuple[Mode, ...]
    outputs: tuple[Mode, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        if self.d_major * self.d_minor != self.dim:
            raise ValueError(
                f"factor dimensions {self.d_major}×{self.d_minor} do not multiply to {self.dim}"
            )
        for i, stage in enumerate(self.stages):
            if stage.reuse_of is not None and not (0 <= stage.reuse_of < i):
                raise ValueError(
                    f"stage {i} ({stage.label!r}) reuses stage {stage.reuse_of}, "
                    "which is not strictly earlier"
                )

    @property
    def depth(self) -> int:
        """Number of traversal events (reused stages count each time)."""
        return len(self.stages)

    def fresh_stages(self) -> Iterable[Stage]:
        """Stages that introduce hardware (reuse traversals skipped)."""
        return (s for s in self.stages if s.reuse_of is None)

    def element_census(self) -> dict[str, int]:
        """Structural census: element kind → number of physical instances."""
        census: dict[str, int] = {}
        for stage in self.fresh_stages():
            for element in stage.elements:
                census[element.kind] = census.get(element.kind, 0) + 1
        return dict(sorted(census.items()))

    def beam_splitter_total(self) -> int:
        """Two-port splitters, counting composite interiors and behavioral
        blocks by their closed-form costs."""
        total = 0
        for stage in self.fresh_stages():
            for element in stage.elements:
                if isinstance(element, BeamSplitter):
                    total += 1
                elif isinstance(element, Exchanger):
                    total += 2
                elif isinstance(element, HoloBeamSplitter):
                    total += 1
                elif isinstance(element, SwapBlock):
                    total += counts.swap_bs_count(element.dim_in, element.dim_out)
                elif isinstance(element, SorterContract):
                    total += counts.sorter_bs_count(element.dim)
        return total

    def pbs_total(self) -> int:
        return sum(
            1
            for stage in self.fresh_stages()
            for element in stage.elements
            if isinstance(element, PolarizingBeamSplitter)
        )


# --- label propagation and closure ---------------------------------------------


def _stage_labels(stage: Stage, labels: set[Mode]) -> set[Mode]:
    table = stage.port_map()
    out: set[Mode] = set()
    for mode in labels:
        element = table.get(mode.path)
        if element is None:
            out.add(mode)
        else:
            out.update(m for m, _ in element.act(mode, stage.direction))
    return out


def stage_frontiers(
    netlist: Netlist, inputs: Iterable[Mode], cap: int = 10**6
) -> list[set[Mode]]:
    """Label sets after each stage, starting from ``inputs``.

    Index 0 is the input set itself; index i+1 the labels after stage i.

    Raises:
        ClosureOverflowError: when the accumulated label count passes ``cap``.
    """
    frontier = set(inputs)
    if not frontier:
        raise ValueError("label propagation needs at least one input mode")
    frontiers = [frontier]
    seen = set(frontier)
    for i, stage in enumerate(netlist.stages):
        frontier = _stage_labels(stage, frontier)
        frontiers.append(frontier)
        seen |= frontier
        if len(seen) > cap:
            raise ClosureOverflowError(
                f"label closure exceeded {cap} labels at stage {i} ({stage.label!r}); "
                "the circuit does not confine its mode labels"
            )
    return frontiers


def reachable_oam_closure(netlist: Netlist, inputs: Iterable[Mode], cap: int = 10**6) -> set[Mode]:
    """Every mode label that can carry amplitude anywhere in the circuit.

    The closure is the union of the input labels and each stage's output
    labels, following only label maps (never amplitude values), so it is a
    deterministic superset of all nonzero-amplitude labels.
    """
    frontiers = stage_frontiers(netlist, inputs, cap=cap)
    closure: set[Mode] = set()
    for labels in frontiers:
        closure |= labels
    return closure


# --- exact simulation -------------------------------------------------------------


def _stage_apply(
    stage: Stage, vector: dict[Mode, complex], loss: LossModel | None
) -> dict[Mode, complex]:
    table = stage.port_map()
    out: dict[Mode, complex] = {}
    for mode, amp in vector.items():
        element = table.get(mode.path)
        if element is None:
            out[mode] = out.get(mode, 0j) + amp
            continue
        for produced, weight in element.act(mode, stage.direction, loss=loss):
            out[produced] = out.get(produced, 0j) + amp * weight
    return out


def operator_of(
    netlist: Netlist,
    basis: ModeBasis | None = None,
    loss_model: LossModel | None = None,
    *,
    inputs: Sequence[Mode] | None = None,
    closure_cap: int = 10**6,
) -> ModeOperator:
    """Exact linear operator of a netlist over its reachable mode space.

    Columns are indexed by the declared (or overridden) input modes; rows by
    the final label frontier, or by ``basis`` when one is supplied.  With a
    basis, every label the light can ever occupy must lie inside it.

    Args:
        netlist: the circuit to simulate.
        basis: optional output/containment basis.  Must contain the full
            reachable closure of the chosen inputs.
        loss_model: optional per-kind transmissions; attenuates amplitudes
            along each route.
        inputs: alternative input modes (defaults to the netlist's declared
            inputs) — used for subspace and periodicity probes.
        closure_cap: safety bound on the label closure size.

    Raises:
        BasisEscapeError: a reachable label falls outside the given basis.
        ClosureOverflowError: the label closure exceeds ``closure_cap``.
    """
    input_modes = tuple(inputs) if inputs is not None else netlist.inputs
    if not input_modes:
        raise ValueError("netlist declares no inputs and none were supplied")
    basis_in = ModeBasis(input_modes)

    frontiers = stage_frontiers(netlist, input_modes, cap=closure_cap)
    if basis is not None:
        for i, labels in enumerate(frontiers):
            stray = [m for m in labels if m not in basis]
            if stray:
                where = "at the inputs" if i == 0 else f"after stage {i - 1} ({netlist.stages[i - 1].label!r})"
                raise BasisEscapeError(
                    f"label {stray[0]} escapes the supplied basis {where}"
                )
        basis_out = basis
    else:
        basis_out = ModeBasis(frontiers[-1])

    matrix = np.zeros((len(basis_out), len(basis_in)), dtype=np.complex128)
    for column, start in enumerate(basis_in):
        vector: dict[Mode, complex] = {start: 1.0 + 0j}
        for stage in netlist.stages:
            vector = _stage_apply(stage, vector, loss_model)
        for mode, amp in vector.items():
            matrix[basis_out.index(mode), column] = amp
    return ModeOperator(basis_in, basis_out, matrix)


# --- serialization -----------------------------------------------------------------


def netlist_to_document(netlist: Netlist, stamp: bool = False) -> dict:
    """JSON-ready document; canonical (no timestamps) unless ``stamp``."""
    stages = []
    for stage in netlist.stages:
        rec: dict = {"label": stage.label}
        if stage.reuse_of is not None:
            rec["reuse_of"] = stage.reuse_of
        rec["elements"] = [element_to_record(e, stage.direction) for e in stage.elements]
        stages.append(rec)
    metadata: dict = {
        "beam_splitter_total": netlist.beam_splitter_total(),
        "pbs_total": netlist.pbs_total(),
        "element_census": netlist.element_census(),
        "depth": netlist.depth,
        "inputs": [m.to_record() for m in netlist.inputs],
        "outputs": [m.to_record() for m in netlist.outputs],
    }
    if stamp:
        import datetime

        metadata["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return {
        "version": NETLIST_VERSION,
        "dim": netlist.dim,
        "variant": netlist.variant,
        "d_A": netlist.d_major,
        "d_B": netlist.d_minor,
        "path_count": netlist.path_count,
        "stages": stages,
        "metadata": metadata,
    }


def netlist_to_json(netlist: Netlist, stamp: bool = False) -> str:
    return json.dumps(netlist_to_document(netlist, stamp=stamp), indent=2) + "\n"


def netlist_from_document(doc: Mapping) -> Netlist:
    try:
        version = str(doc["version"])
        dim = int(doc["dim"])
        variant = str(doc["variant"])
        d_major = int(doc["d_A"])
        d_minor = int(doc["d_B"])
        path_count = int(doc["path_count"])
        stage_docs = doc["stages"]
        metadata = doc.get("metadata", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise NetlistFormatError(f"netlist document is missing required fields: {exc}") from exc
    if version.split(".")[0] != NETLIST_VERSION.split(".")[0]:
        raise NetlistFormatError(
            f"unsupported netlist format version {version!r} (supported: {NETLIST_VERSION})"
        )
    stages: list[Stage] = []
    for i, rec in enumerate(stage_docs):
        if not isinstance(rec, Mapping):
            raise NetlistFormatError(f"stage {i} is not an object: {rec!r}")
        label = str(rec.get("label", f"stage-{i}"))
        reuse_of = rec.get("reuse_of")
        elements: list[Element] = []
        directions: set[str] = set()
        for erec in rec.get("elements", []):
            element, direction = element_from_record(erec)
            elements.append(element)
            directions.add(direction)
        if len(directions) > 1:
            raise NetlistFormatError(
                f"stage {i} ({label!r}) mixes traversal directions {sorted(directions)}"
            )
        direction = directions.pop() if directions else FORWARD
        try:
            stages.append(
                Stage(
                    label=label,
                    elements=tuple(elements),
                    direction=direction,
                    reuse_of=None if reuse_of is None else int(reuse_of),
                )
            )
        except (TypeError, ValueError) as exc:
            raise NetlistFormatError(f"bad stage {i} ({label!r}): {exc}") from exc
    inputs = tuple(Mode.from_record(r) for r in metadata.get("inputs", []))
    outputs = tuple(Mode.from_record(r) for r in metadata.get("outputs", []))
    try:
        return Netlist(
            dim=dim,
            variant=variant,
            d_major=d_major,
            d_minor=d_minor,
            path_count=path_count,
            stages=tuple(stages),
            inputs=inputs,
            outputs=outputs,
        )
    except ValueError as exc:
        raise NetlistFormatError(str(exc)) from exc


def netlist_from_json(text: str) -> Netlist:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetlistFormatError(f"netlist file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise NetlistFormatError("netlist file must hold a JSON object")
    return netlist_from_document(doc)
