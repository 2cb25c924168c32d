"""Optical elements as exact transfer rules on mode labels.

Every element maps an incoming mode to a short list of ``(mode, amplitude)``
pairs.  The rules are exact: amplitudes that are ±1 or 0 by construction are
emitted as exact Python numbers, never as ``cos``/``sin`` round-off, so
phase-free contracts stay phase-free to the last bit.

Conventions fixed here (and relied on everywhere else):

* A mirror reflection flips the OAM sign and contributes a factor −1.
* A Dove prism rotated by angle ``a`` sends ``|k⟩`` to ``−exp(2iak)|−k⟩``.
* A beam splitter is the symmetric 50:50 convention: from the first port
  ``|k⟩ → (|k⟩₁ + |−k⟩₂)/√2``, from the second ``|k⟩ → (|−k⟩₁ − |k⟩₂)/√2``;
  it is an involution.
* A polarizing beam splitter transmits H unchanged and reflects V with the
  same sign-and-OAM-flip convention as the mirror.  With no second port it
  retro-reflects V back along the same path.
* Backward traversal of any element applies the inverse of its forward
  unitary, so a folded light path reconstructs the inverse transformation.

Loss is amplitude scaling by √T per traversal.  Mirrors, phase shifters and
path relabelings are lossless; composite elements scale each route by the
transmissions of the primitives that route actually crosses.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Mapping

from .errors import ContractDomainError, NetlistFormatError
from .modespace import Mode, require_power_of_two

FORWARD = "forward"
BACKWARD = "backward"

#: A transfer result: output modes with their complex amplitudes.
Superposition = list[tuple[Mode, complex]]


def _check_direction(direction: str) -> None:
    if direction not in (FORWARD, BACKWARD):
        raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}, got {direction!r}")


@dataclass(frozen=True)
class LossModel:
    """Intensity transmission per lossy element kind.

    Mirrors, phase shifters and path relabelings are treated as lossless.
    Amplitudes scale by the square root of the relevant transmission once
    per traversal of the element.

    Attributes:
        beam_splitter: transmission of each beam-splitter pass.
        dove: transmission of each Dove-prism pass.
        polarizing_beam_splitter: transmission of each PBS pass.
        half_wave_plate: transmission of each wave-plate pass.
        hologram: transmission of each hologram pass (default 0.90).
    """

    beam_splitter: float = 1.0
    dove: float = 1.0
    polarizing_beam_splitter: float = 1.0
    half_wave_plate: float = 1.0
    hologram: float = 0.90

    def __post_init__(self) -> None:
        for name in ("beam_splitter", "dove", "polarizing_beam_splitter", "half_wave_plate", "hologram"):
            t = getattr(self, name)
            if not (0.0 < t <= 1.0):
                raise ValueError(f"{name} transmission must be in (0, 1], got {t!r}")

    @classmethod
    def uniform(cls, transmission: float = 1.0, hologram: float = 0.90) -> "LossModel":
        """One common transmission for every swept kind, holograms separate."""
        return cls(
            beam_splitter=transmission,
            dove=transmission,
            polarizing_beam_splitter=transmission,
            half_wave_plate=transmission,
            hologram=hologram,
        )

    @classmethod
    def lossless(cls) -> "LossModel":
        return cls(hologram=1.0)

    # Amplitude factors (√T) per single primitive pass.
    def amp_beam_splitter(self) -> float:
        return math.sqrt(self.beam_splitter)

    def amp_dove(self) -> float:
        return math.sqrt(self.dove)

    def amp_pbs(self) -> float:
        return math.sqrt(self.polarizing_beam_splitter)

    def amp_hwp(self) -> float:
        return math.sqrt(self.half_wave_plate)

    def amp_hologram(self) -> float:
        return math.sqrt(self.hologram)


class Element:
    """Common interface for everything that can sit in a netlist stage."""

    kind: str = "element"
    behavioral: bool = False

    @property
    def in_ports(self) -> tuple[int, ...]:
        raise NotImplementedError

    @property
    def out_ports(self) -> tuple[int, ...]:
        return self.in_ports

    @property
    def all_ports(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.in_ports) | set(self.out_ports)))

    def entry_ports(self, direction: str) -> tuple[int, ...]:
        return self.in_ports if direction == FORWARD else self.out_ports

    def act(self, mode: Mode, direction: str = FORWARD, loss: LossModel | None = None) -> Superposition:
        """Transfer rule with passthrough for untouched paths.

        A mode on a path the element does not touch at all passes through
        unchanged.  A mode arriving through an exit-only port (possible only
        for behavioral blocks) is a wiring error and raises.
        """
        _check_direction(direction)
        if mode.path not in self.all_ports:
            return [(mode, 1.0 + 0j)]
        if mode.path not in self.entry_ports(direction):
            raise ContractDomainError(
                f"{self.kind} on ports {self.all_ports}: mode {mode} arrives through an exit-only "
                f"port when traversed {direction}"
            )
        out = self._transfer(mode, direction)
        if loss is None:
            return out
        return [
            (m, amp * self._route_loss(mode.path, m.path, loss))
            for m, amp in out
        ]

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        raise NotImplementedError

    def _route_loss(self, path_in: int, path_out: int, loss: LossModel) -> float:
        return 1.0

    def params(self) -> dict:
        raise NotImplementedError


# --- single-path primitives ---------------------------------------------------


@dataclass(frozen=True)
class DovePrism(Element):
    """Rotated Dove prism: ``|k⟩ → −exp(2i·angle·k)|−k⟩``.  Self-inverse."""

    path: int
    angle: float

    kind = "dove_prism"

    @property
    def in_ports(self) -> tuple[int, ...]:
        return (self.path,)

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        # The inverse of the rule is the rule itself, so direction is moot.
        k = mode.oam
        if k == 0:
            amp = -1.0 + 0j  # exp(0) exactly
        else:
            amp = -cmath.exp(2j * self.angle * k)
        return [(Mode(-k, mode.path, mode.pol), amp)]

    def _route_loss(self, path_in: int, path_out: int, loss: LossModel) -> float:
        return loss.amp_dove()

    def params(self) -> dict:
        return {"path": self.path, "angle": self.angle}


@dataclass(frozen=True)
class Hologram(Element):
    """OAM shifter: ``|k⟩ → |k + shift⟩`` forward, ``|k − shift⟩`` backward."""

    path: int
    shift: int

    kind = "hologram"

    @property
    def in_ports(self) -> tuple[int, ...]:
        return (self.path,)

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        step = self.shift if direction == FORWARD else -self.shift
        return [(Mode(mode.oam + step, mode.path, mode.pol), 1.0 + 0j)]

    def _route_loss(self, path_in: int, path_out: int, loss: LossModel) -> float:
        return loss.amp_hologram()

    def params(self) -> dict:
        return {"path": self.path, "shift": self.shift}


@dataclass(frozen=True)
class PhaseShifter(Element):
    """Global phase on one path: ``exp(i·phase)`` forward, conjugated backward."""

    path: int
    phase: float

    kind = "phase_shifter"

    @property
    def in_ports(self) -> tuple[int, ...]:
        return (self.path,)

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        phi = self.phase if direction == FORWARD else -self.phase
        # Half-turn phases appear throughout the butterflies; keep them exact.
        if phi == math.pi or phi == -math.pi:
            amp = -1.0 + 0j
        elif phi == 0.0:
            amp = 1.0 + 0j
        else:
            amp = cmath.exp(1j * phi)
        return [(mode, amp)]

    def params(self) -> dict:
        return {"path": self.path, "phase": self.phase}


@dataclass(frozen=True)
class Mirror(Element):
    """Plain mirror: ``|k⟩ → −|−k⟩``.  Self-inverse, lossless here."""

    path: int

    kind = "mirror"

    @property
    def in_ports(self) -> tuple[int, ...]:
        return (self.path,)

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        return [(Mode(-mode.oam, mode.path, mode.pol), -1.0 + 0j)]

    def params(self) -> dict:
        return {"path": self.path}


# --- two-path primitives ------------------------------------------------------


@dataclass(frozen=True)
class BeamSplitter(Element):
    """Symmetric 50:50 splitter over two paths.

    From ``path_a``: ``|k⟩ → (|k⟩ₐ + |−k⟩_b)/√2``; from ``path_b``:
    ``|k⟩ → (|−k⟩ₐ − |k⟩_b)/√2``.  Applying it twice is the identity, so
    backward traversal reuses the forward rule.
    """

    path_a: int
    path_b: int

    kind = "beam_splitter"

    def __post_init__(self) -> None:
        if self.path_a == self.path_b:
            raise ValueError("beam splitter needs two distinct paths")

    @property
    def in_ports(self) -> tuple[int, ...]:
        return (self.path_a, self.path_b)

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        k, pol = mode.oam, mode.pol
        root_half = 1.0 / math.sqrt(2.0)
        if mode.path == self.path_a:
            return [
                (Mode(k, self.path_a, pol), root_half + 0j),
                (Mode(-k, self.path_b, pol), root_half + 0j),
            ]
        return [
            (Mode(-k, self.path_a, pol), root_half + 0j),
            (Mode(k, self.path_b, pol), -root_half + 0j),
        ]

    def _route_loss(self, path_in: int, path_out: int, loss: LossModel) -> float:
        return loss.amp_beam_splitter()

    def params(self) -> dict:
        return {"path_a": self.path_a, "path_b": self.path_b}


@dataclass(frozen=True)
class PolarizingBeamSplitter(Element):
    """Polarization router: H transmits unchanged, V reflects like a mirror.

    Reflection flips the OAM sign and carries the −1 mirror sign.  With
    ``path_b`` set, V crosses between the two paths; with ``path_b = None``
    the V component retro-reflects back along its own path.  Self-inverse.
    """

    path_a: int
    path_b: int | None = None

    kind = "polarizing_beam_splitter"

    def __post_init__(self) -> None:
        if self.path_b is not None and self.path_a == self.path_b:
            raise ValueError("polarizing beam splitter needs distinct paths (or path_b=None)")

    @property
    def in_ports(self) -> tuple[int, ...]:
        if self.path_b is None:
            return (self.path_a,)
        return (self.path_a, self.path_b)

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        if mode.pol is None:
            raise ContractDomainError(
                f"polarizing beam splitter on path {self.path_a} received the "
                f"polarization-blind mode {mode}"
            )
        if mode.pol == "H":
            return [(mode, 1.0 + 0j)]
        # V: mirror-style reflection, crossing paths when there are two.
        if self.path_b is None:
            dest = self.path_a
        else:
            dest = self.path_b if mode.path == self.path_a else self.path_a
        return [(Mode(-mode.oam, dest, "V"), -1.0 + 0j)]

    def _route_loss(self, path_in: int, path_out: int, loss: LossModel) -> float:
        return loss.amp_pbs()

    def params(self) -> dict:
        return {"path_a": self.path_a, "path_b": self.path_b}


@dataclass(frozen=True)
class HalfWavePlate(Element):
    """Half-wave plate at 45°, the only setting used here: swaps H and V."""

    path: int
    angle: float = math.pi / 4

    kind = "half_wave_plate"

    def __post_init__(self) -> None:
        if not math.isclose(self.angle, math.pi / 4, rel_tol=0.0, abs_tol=1e-12):
            raise ValueError("only the 45° half-wave plate setting is supported")

    @property
    def in_ports(self) -> tuple[int, ...]:
        return (self.path,)

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        if mode.pol is None:
            raise ContractDomainError(
                f"half-wave plate on path {self.path} received the polarization-blind mode {mode}"
            )
        flipped = "V" if mode.pol == "H" else "H"
        return [(Mode(mode.oam, mode.path, flipped), 1.0 + 0j)]

    def _route_loss(self, path_in: int, path_out: int, loss: LossModel) -> float:
        return loss.amp_hwp()

    def params(self) -> dict:
        return {"path": self.path, "angle": self.angle}


@dataclass(frozen=True)
class PathPermutation(Element):
    """Pure relabeling of paths; amplitude 1, lossless, OAM untouched.

    ``mapping`` pairs each source path with its target; sources and targets
    must be the same set (a true permutation of the touched paths).
    """

    mapping: tuple[tuple[int, int], ...]

    kind = "path_permutation"

    def __post_init__(self) -> None:
        # Accept any mapping/iterable-of-pairs and normalize to sorted pairs.
        pairs = self.mapping.items() if isinstance(self.mapping, Mapping) else self.mapping
        normalized = tuple(sorted((int(src), int(dst)) for src, dst in pairs))
        if not normalized:
            raise ValueError("path permutation needs at least one pair")
        sources = [src for src, _ in normalized]
        targets = [dst for _, dst in normalized]
        if len(set(sources)) != len(sources):
            raise ValueError(f"duplicate source path in permutation: {normalized}")
        if set(sources) != set(targets):
            raise ValueError(
                f"permutation must map a path set onto itself; sources {sorted(set(sources))} "
                f"vs targets {sorted(set(targets))}"
            )
        object.__setattr__(self, "mapping", normalized)

    @property
    def in_ports(self) -> tuple[int, ...]:
        return tuple(src for src, _ in self.mapping)

    def as_dict(self) -> dict[int, int]:
        return dict(self.mapping)

    def inverse_dict(self) -> dict[int, int]:
        return {dst: src for src, dst in self.mapping}

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        table = self.as_dict() if direction == FORWARD else self.inverse_dict()
        return [(Mode(mode.oam, table[mode.path], mode.pol), 1.0 + 0j)]

    def params(self) -> dict:
        return {"mapping": {str(src): dst for src, dst in self.mapping}}


# --- composite two-path elements ----------------------------------------------


def _quarter_turns(numerator: int, order: int) -> int | None:
    """Return n when angle = π·numerator/(2·order) is n·(π/2); else None."""
    if numerator % order == 0:
        return numerator // order
    return None


@dataclass(frozen=True)
class Exchanger(Element):
    """OAM-dependent router over two paths with OAM period ``order``.

    An interferometer whose internal rotation angle is π·k/(2·order) for
    input OAM k on the first path (π·(k+order)/(2·order) from the second).
    OAM values at even multiples of the order stay on their path; odd
    multiples cross, dropping (first→second) or gaining (second→first) one
    order quantum.  On those multiples the route amplitude is exactly +1 in
    both traversal directions, which is what lets sorting circuits built
    from these stay free of correction phases.
    """

    path_a: int
    path_b: int
    order: int

    kind = "exchanger"

    def __post_init__(self) -> None:
        if self.path_a == self.path_b:
            raise ValueError("exchanger needs two distinct paths")
        if self.order < 1:
            raise ValueError(f"exchanger order must be a positive integer, got {self.order}")

    @property
    def in_ports(self) -> tuple[int, ...]:
        return (self.path_a, self.path_b)

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        m, pol = self.order, mode.pol
        from_a = mode.path == self.path_a
        # The interferometer angle is set by the OAM as seen on the first
        # path: entering on the second is equivalent to k = j + order.
        k_eff = mode.oam if from_a else mode.oam + m
        turns = _quarter_turns(k_eff, m)
        if turns is not None and turns % 2 == 0:
            # Angle is a multiple of π: pure stay, amplitude exactly +1.
            return [(mode, 1.0 + 0j)]
        if turns is not None:
            # Odd quarter-turn pair: pure crossover, amplitude exactly +1.
            if from_a:
                return [(Mode(mode.oam - m, self.path_b, pol), 1.0 + 0j)]
            return [(Mode(mode.oam + m, self.path_a, pol), 1.0 + 0j)]
        theta = math.pi * k_eff / (2 * m)
        c, s = math.cos(theta), math.sin(theta)
        if direction == FORWARD:
            envelope = cmath.exp(-1j * theta)
            cross = 1j * envelope * s
        else:
            envelope = cmath.exp(1j * theta)
            cross = -1j * envelope * s
        stay = envelope * c
        if from_a:
            return [
                (Mode(mode.oam, self.path_a, pol), stay),
                (Mode(mode.oam - m, self.path_b, pol), cross),
            ]
        return [
            (Mode(mode.oam + m, self.path_a, pol), cross),
            (Mode(mode.oam, self.path_b, pol), stay),
        ]

    def _route_loss(self, path_in: int, path_out: int, loss: LossModel) -> float:
        # Interior: two splitter passes and one prism pass on every route;
        # holograms sit on the second port (one inbound, one outbound), so a
        # route crosses as many holograms as second-port ends it has.
        holograms = (path_in == self.path_b) + (path_out == self.path_b)
        return (
            loss.amp_beam_splitter() ** 2
            * loss.amp_dove()
            * loss.amp_hologram() ** holograms
        )

    def params(self) -> dict:
        return {"path_a": self.path_a, "path_b": self.path_b, "order": self.order}


@dataclass(frozen=True)
class HoloBeamSplitter(Element):
    """Splitter with an OAM-independent mixing angle and an OAM offset.

    The mixing angle is π·ratio_index/(2·order); the crossing routes shift
    the OAM by ``order`` (down when leaving through the second path, up when
    leaving through the first).  ``ratio_index = 0`` is the identity;
    ``ratio_index = order`` is a full crossover with amplitude exactly +1.
    """

    path_a: int
    path_b: int
    ratio_index: float
    order: int

    kind = "holo_beam_splitter"

    def __post_init__(self) -> None:
        if self.path_a == self.path_b:
            raise ValueError("holo beam splitter needs two distinct paths")
        if self.order < 1:
            raise ValueError(f"holo beam splitter order must be a positive integer, got {self.order}")

    @property
    def in_ports(self) -> tuple[int, ...]:
        return (self.path_a, self.path_b)

    def _exact_turns(self) -> int | None:
        r = self.ratio_index
        if isinstance(r, int) or (isinstance(r, float) and r.is_integer()):
            return _quarter_turns(int(r), self.order)
        return None

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        m, pol = self.order, mode.pol
        from_a = mode.path == self.path_a
        turns = self._exact_turns()
        if turns is not None and turns % 2 == 0:
            return [(mode, 1.0 + 0j)]  # identity setting, exact
        if turns is not None:
            # Full crossover, amplitude exactly +1 from either port.
            if from_a:
                return [(Mode(mode.oam - m, self.path_b, pol), 1.0 + 0j)]
            return [(Mode(mode.oam + m, self.path_a, pol), 1.0 + 0j)]
        theta = math.pi * self.ratio_index / (2 * m)
        c, s = math.cos(theta), math.sin(theta)
        if direction == FORWARD:
            envelope = cmath.exp(1j * theta)
            cross = -1j * envelope * s
        else:
            envelope = cmath.exp(-1j * theta)
            cross = 1j * envelope * s
        stay = envelope * c
        if from_a:
            return [
                (Mode(mode.oam, self.path_a, pol), stay),
                (Mode(mode.oam - m, self.path_b, pol), cross),
            ]
        return [
            (Mode(mode.oam + m, self.path_a, pol), cross),
            (Mode(mode.oam, self.path_b, pol), stay),
        ]

    def _route_loss(self, path_in: int, path_out: int, loss: LossModel) -> float:
        # One splitter pass per route; the two holograms sit on the first
        # port, so a route crosses as many as first-port ends it has.
        holograms = (path_in == self.path_a) + (path_out == self.path_a)
        return loss.amp_beam_splitter() * loss.amp_hologram() ** holograms

    def params(self) -> dict:
        return {
            "path_a": self.path_a,
            "path_b": self.path_b,
            "ratio_index": float(self.ratio_index),
            "order": self.order,
        }


# --- behavioral blocks ----------------------------------------------------------


@dataclass(frozen=True)
class SwapBlock(Element):
    """Exact OAM↔path index exchange, kept behavioral.

    Forward, a mode ``|step·k⟩`` entering input port ``p`` (with
    ``step = oam_step·dim_in/dim_out``) leaves as
    ``|oam_step·(dim_in·⌊k/dim_out⌋ + p)⟩`` through output port
    ``k mod dim_out``.  Backward traversal inverts this exactly.  The
    interior wiring is not expanded; its element cost enters through the
    closed-form counts and its loss through a uniform per-route factor.
    """

    dim_in: int
    dim_out: int
    oam_step: int
    in_paths: tuple[int, ...]
    out_paths: tuple[int, ...]

    kind = "swap"
    behavioral = True

    def __post_init__(self) -> None:
        require_power_of_two(self.dim_in, "swap input dimension")
        require_power_of_two(self.dim_out, "swap output dimension")
        if self.dim_out > self.dim_in:
            raise ValueError(
                f"swap output dimension {self.dim_out} exceeds input dimension {self.dim_in}; "
                "build the larger-to-smaller block and traverse it backward instead"
            )
        if self.oam_step < 1:
            raise ValueError(f"swap oam_step must be a positive integer, got {self.oam_step}")
        object.__setattr__(self, "in_paths", tuple(int(p) for p in self.in_paths))
        object.__setattr__(self, "out_paths", tuple(int(p) for p in self.out_paths))
        if len(self.in_paths) != self.dim_in or len(set(self.in_paths)) != self.dim_in:
            raise ValueError(f"swap needs {self.dim_in} distinct input paths, got {self.in_paths}")
        if len(self.out_paths) != self.dim_out or len(set(self.out_paths)) != self.dim_out:
            raise ValueError(f"swap needs {self.dim_out} distinct output paths, got {self.out_paths}")

    @property
    def in_ports(self) -> tuple[int, ...]:
        return self.in_paths

    @property
    def out_ports(self) -> tuple[int, ...]:
        return self.out_paths

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        mu = self.oam_step
        ratio = self.dim_in // self.dim_out
        if direction == FORWARD:
            step = mu * ratio
            if mode.oam % step != 0:
                raise ContractDomainError(
                    f"swap expects OAM multiples of {step} on its input ports, got {mode}"
                )
            k = mode.oam // step
            p = self.in_paths.index(mode.path)
            out_oam = mu * (self.dim_in * (k // self.dim_out) + p)
            out_path = self.out_paths[k % self.dim_out]
        else:
            if mode.oam % mu != 0:
                raise ContractDomainError(
                    f"swap (backward) expects OAM multiples of {mu} on its output ports, got {mode}"
                )
            k = mode.oam // mu
            p = self.out_paths.index(mode.path)
            out_oam = mu * ratio * (self.dim_out * (k // self.dim_in) + p)
            out_path = self.in_paths[k % self.dim_in]
        return [(Mode(out_oam, out_path, mode.pol), 1.0 + 0j)]

    def _route_loss(self, path_in: int, path_out: int, loss: LossModel) -> float:
        # Uniform modeling choice: every route crosses one exchanger-like
        # layer per halving level — two splitter passes, one prism pass and
        # one hologram pass per layer.
        levels = max(self.dim_in, self.dim_out).bit_length() - 1
        per_level = loss.amp_beam_splitter() ** 2 * loss.amp_dove() * loss.amp_hologram()
        return per_level**levels

    def params(self) -> dict:
        return {
            "dim_in": self.dim_in,
            "dim_out": self.dim_out,
            "oam_step": self.oam_step,
            "in_paths": list(self.in_paths),
            "out_paths": list(self.out_paths),
        }


@dataclass(frozen=True)
class SorterContract(Element):
    """Behavioral stand-in for a radix-two OAM sorter.

    Forward, ``|oam_step·k⟩`` entering the root port leaves through port
    ``k mod dim`` carrying ``|oam_step·dim·⌊k/dim⌋⟩``; backward inverts
    this from any port.  Forward entry through a non-root port is outside
    the contract.  Used for contract tests and compact serialization; the
    synthesized circuits expand sorters structurally instead.
    """

    dim: int
    oam_step: int
    paths: tuple[int, ...]

    kind = "sorter_contract"
    behavioral = True

    def __post_init__(self) -> None:
        require_power_of_two(self.dim, "sorter dimension")
        if self.oam_step < 1:
            raise ValueError(f"sorter oam_step must be a positive integer, got {self.oam_step}")
        object.__setattr__(self, "paths", tuple(int(p) for p in self.paths))
        if len(self.paths) != self.dim or len(set(self.paths)) != self.dim:
            raise ValueError(f"sorter needs {self.dim} distinct paths, got {self.paths}")

    @property
    def in_ports(self) -> tuple[int, ...]:
        return self.paths

    def _transfer(self, mode: Mode, direction: str) -> Superposition:
        mu, d = self.oam_step, self.dim
        if direction == FORWARD:
            if mode.path != self.paths[0]:
                raise ContractDomainError(
                    f"sorter contract is defined for forward entry through its root port "
                    f"{self.paths[0]} only, got {mode}"
                )
            if mode.oam % mu != 0:
                raise ContractDomainError(
                    f"sorter expects OAM multiples of {mu} at its root, got {mode}"
                )
            k = mode.oam // mu
            return [(Mode(mu * d * (k // d), self.paths[k % d], mode.pol), 1.0 + 0j)]
        if mode.oam % (mu * d) != 0:
            raise ContractDomainError(
                f"sorter (backward) expects OAM multiples of {mu * d}, got {mode}"
            )
        j = mode.oam // (mu * d)
        r = self.paths.index(mode.path)
        return [(Mode(mu * (d * j + r), self.paths[0], mode.pol), 1.0 + 0j)]

    def _route_loss(self, path_in: int, path_out: int, loss: LossModel) -> float:
        levels = self.dim.bit_length() - 1
        per_level = loss.amp_beam_splitter() ** 2 * loss.amp_dove() * loss.amp_hologram()
        return per_level**levels

    def params(self) -> dict:
        return {"dim": self.dim, "oam_step": self.oam_step, "paths": list(self.paths)}


# --- spec-level free functions ---------------------------------------------------


def primitive_action(element: Element, mode: Mode) -> Superposition:
    """Forward transfer rule of ``element`` applied to ``mode``.

    Modes on untouched paths pass through unchanged.

    Raises:
        TypeError: for objects that are not elements.
    """
    if not isinstance(element, Element):
        raise TypeError(f"unknown element kind: {element!r}")
    return element.act(mode, FORWARD)


def backward_action(element: Element, mode: Mode) -> Superposition:
    """Inverse transfer rule — what a mode sees traversing the element backward."""
    if not isinstance(element, Element):
        raise TypeError(f"unknown element kind: {element!r}")
    return element.act(mode, BACKWARD)


def lossy_action(element: Element, loss: LossModel, mode: Mode, direction: str = FORWARD) -> Superposition:
    """Transfer rule with per-route amplitude attenuation applied."""
    if not isinstance(element, Element):
        raise TypeError(f"unknown element kind: {element!r}")
    return element.act(mode, direction, loss=loss)


# --- serialization ----------------------------------------------------------------

_ELEMENT_CLASSES: dict[str, type] = {
    cls.kind: cls
    for cls in (
        DovePrism,
        Hologram,
        PhaseShifter,
        Mirror,
        BeamSplitter,
        PolarizingBeamSplitter,
        HalfWavePlate,
        PathPermutation,
        Exchanger,
        HoloBeamSplitter,
        SwapBlock,
        SorterContract,
    )
}


def element_to_record(element: Element, direction: str = FORWARD) -> dict:
    """JSON-ready record: kind tag, params, ports, traversal direction."""
    _check_direction(direction)
    rec: dict = {
        "kind": element.kind,
        "params": element.params(),
        "in_ports": list(element.in_ports),
        "out_ports": list(element.out_ports),
    }
    if element.behavioral:
        rec["behavioral"] = True
    rec["direction"] = direction
    return rec


def element_from_record(rec: Mapping) -> tuple[Element, str]:
    """Inverse of :func:`element_to_record`; returns (element, direction)."""
    try:
        kind = rec["kind"]
        params = dict(rec["params"])
        direction = rec.get("direction", FORWARD)
    except (KeyError, TypeError) as exc:
        raise NetlistFormatError(f"bad element record {rec!r}: {exc}") from exc
    _check_direction(direction)
    cls = _ELEMENT_CLASSES.get(kind)
    if cls is None:
        raise NetlistFormatError(f"unknown element kind {kind!r}")
    try:
        if cls is PathPermutation:
            mapping = tuple((int(src), int(dst)) for src, dst in params["mapping"].items())
            element = PathPermutation(mapping)
        elif cls is SwapBlock:
            element = SwapBlock(
                dim_in=int(params["dim_in"]),
                dim_out=int(params["dim_out"]),
                oam_step=int(params["oam_step"]),
                in_paths=tuple(params["in_paths"]),
                out_paths=tuple(params["out_paths"]),
            )
        elif cls is SorterContract:
            element = SorterContract(
                dim=int(params["dim"]),
                oam_step=int(params["oam_step"]),
                paths=tuple(params["paths"]),
            )
        else:
            element = cls(**params)
    except (KeyError, TypeError, ValueError) as exc:
        raise NetlistFormatError(f"bad parameters for element kind {kind!r}: {exc}") from exc
    return element, direction
