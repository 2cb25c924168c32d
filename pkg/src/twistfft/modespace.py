"""Mode labels, finite bases, pure states, and linear operators over them.

A single optical mode is labeled by an integer amount of orbital angular
momentum (OAM), a propagation-path index, and optionally a linear
polarization.  Circuits act on finite, deterministic bases of such labels;
states and operators are plain complex vectors/matrices over a basis.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BasisMismatchError, NormalizationError, NetlistFormatError

POLARIZATIONS = ("H", "V")

#: Norm tolerance for states built through the public constructor.
NORM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Mode:
    """One basis label: ``oam`` quanta on path ``path``, optional polarization.

    Args:
        oam: signed integer number of OAM quanta.
        path: non-negative propagation-path index.
        pol: ``"H"``, ``"V"`` or ``None`` for polarization-blind circuits.
    """

    oam: int
    path: int = 0
    pol: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.oam, int) or isinstance(self.oam, bool):
            raise TypeError(f"oam must be an integer, got {self.oam!r}")
        if not isinstance(self.path, int) or isinstance(self.path, bool):
            raise TypeError(f"path must be an integer, got {self.path!r}")
        if self.path < 0:
            raise ValueError(f"path must be non-negative, got {self.path}")
        if self.pol is not None and self.pol not in POLARIZATIONS:
            raise ValueError(f"pol must be one of {POLARIZATIONS} or None, got {self.pol!r}")

    def sort_key(self) -> tuple[int, int, int]:
        """Deterministic ordering key: lexicographic on (path, oam, pol)."""
        pol_rank = 0 if self.pol is None else 1 + POLARIZATIONS.index(self.pol)
        return (self.path, self.oam, pol_rank)

    def to_record(self) -> dict:
        """JSON-ready record with stable key order."""
        rec: dict = {"oam": self.oam, "path": self.path}
        if self.pol is not None:
            rec["pol"] = self.pol
        return rec

    @classmethod
    def from_record(cls, rec: Mapping) -> "Mode":
        try:
            return cls(int(rec["oam"]), int(rec["path"]), rec.get("pol"))
        except (KeyError, TypeError, ValueError) as exc:
            raise NetlistFormatError(f"bad mode record {rec!r}: {exc}") from exc

    def __str__(self) -> str:
        pol = f",{self.pol}" if self.pol is not None else ""
        return f"|{self.oam}⟩@p{self.path}{pol}"


class ModeBasis:
    """Finite ordered set of modes with positional lookup.

    The ordering is always lexicographic on (path, oam, pol) and duplicates
    are removed, so two bases built from the same mode set are identical —
    matrices and serialized artifacts come out byte-reproducible.
    """

    __slots__ = ("modes", "_index")

    def __init__(self, modes: Iterable[Mode]):
        ordered = tuple(sorted(set(modes), key=Mode.sort_key))
        if not ordered:
            raise ValueError("a basis needs at least one mode")
        pol_aware = {m.pol is not None for m in ordered}
        if len(pol_aware) > 1:
            raise ValueError("cannot mix polarized and polarization-blind modes in one basis")
        object.__setattr__(self, "modes", ordered)
        object.__setattr__(self, "_index", {m: i for i, m in enumerate(ordered)})

    def index(self, mode: Mode) -> int:
        try:
            return self._index[mode]
        except KeyError:
            raise KeyError(f"mode {mode} is not in this basis ({len(self)} modes)") from None

    def __len__(self) -> int:
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)

    def __contains__(self, mode: Mode) -> bool:
        return mode in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, ModeBasis) and self.modes == other.modes

    def __hash__(self) -> int:
        return hash(self.modes)

    def __repr__(self) -> str:
        head = ", ".join(str(m) for m in self.modes[:4])
        tail = ", …" if len(self.modes) > 4 else ""
        return f"ModeBasis[{len(self)}: {head}{tail}]"


class PureState:
    """Complex amplitude vector over a basis.

    States built directly (or loaded from file) must be normalized to
    ``1 ± 1e-12``; states produced by applying a lossy operator may carry
    norm below one and are constructed with ``require_normalized=False``.
    """

    __slots__ = ("basis", "amplitudes")

    def __init__(
        self,
        basis: ModeBasis,
        amplitudes: Sequence[complex] | np.ndarray,
        *,
        require_normalized: bool = True,
        tolerance: float = NORM_TOLERANCE,
    ):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1).copy()
        if amps.shape != (len(basis),):
            raise ValueError(f"amplitude vector has length {amps.size}, basis has {len(basis)} modes")
        if require_normalized:
            norm = float(np.linalg.norm(amps))
            if abs(norm - 1.0) > tolerance:
                raise NormalizationError(f"state norm is {norm!r}, expected 1 ± {tolerance}")
        amps.setflags(write=False)
        self.basis = basis
        self.amplitudes = amps

    @classmethod
    def from_components(
        cls, components: Mapping[Mode, complex], *, require_normalized: bool = True
    ) -> "PureState":
        """Build a state from a ``{mode: amplitude}`` map."""
        basis = ModeBasis(components.keys())
        amps = np.zeros(len(basis), dtype=np.complex128)
        for mode, value in components.items():
            amps[basis.index(mode)] = value
        return cls(basis, amps, require_normalized=require_normalized)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, mode: Mode) -> complex:
        """Amplitude of ``mode``; exactly 0 for modes outside the basis."""
        if mode not in self.basis:
            return 0j
        return complex(self.amplitudes[self.basis.index(mode)])

    def __repr__(self) -> str:
        return f"PureState({len(self.basis)} modes, norm={self.norm:.6f})"


class ModeOperator:
    """Complex matrix mapping amplitudes over ``basis_in`` to ``basis_out``.

    The matrix is indexed ``[output mode, input mode]``.  Lossless circuits
    yield isometries (columns orthonormal); lossy ones are sub-unitary.
    """

    __slots__ = ("basis_in", "basis_out", "matrix")

    def __init__(self, basis_in: ModeBasis, basis_out: ModeBasis, matrix: np.ndarray):
        mat = np.asarray(matrix, dtype=np.complex128).copy()
        if mat.shape != (len(basis_out), len(basis_in)):
            raise ValueError(
                f"matrix shape {mat.shape} does not match bases "
                f"({len(basis_out)} out × {len(basis_in)} in)"
            )
        mat.setflags(write=False)
        self.basis_in = basis_in
        self.basis_out = basis_out
        self.matrix = mat

    @classmethod
    def identity(cls, basis: ModeBasis) -> "ModeOperator":
        return cls(basis, basis, np.eye(len(basis), dtype=np.complex128))

    @property
    def unitarity_residual(self) -> float:
        """``max |M†M − I|`` — 0 for isometries, positive under loss."""
        gram = self.matrix.conj().T @ self.matrix
        return float(np.max(np.abs(gram - np.eye(len(self.basis_in)))))

    def is_unitary(self, tolerance: float = 1e-10) -> bool:
        return self.unitarity_residual <= tolerance

    def block(self, out_modes: Sequence[Mode], in_modes: Sequence[Mode]) -> np.ndarray:
        """Sub-matrix for the given output/input mode lists (missing modes → zero rows)."""
        rows = np.zeros((len(out_modes), len(self.basis_in)), dtype=np.complex128)
        for i, mode in enumerate(out_modes):
            if mode in self.basis_out:
                rows[i] = self.matrix[self.basis_out.index(mode)]
        cols = np.zeros((len(out_modes), len(in_modes)), dtype=np.complex128)
        for j, mode in enumerate(in_modes):
            cols[:, j] = rows[:, self.basis_in.index(mode)]
        return cols

    def __matmul__(self, other: "ModeOperator") -> "ModeOperator":
        if other.basis_out != self.basis_in:
            raise BasisMismatchError(
                f"cannot compose: inner bases differ ({other.basis_out!r} vs {self.basis_in!r})"
            )
        return ModeOperator(other.basis_in, self.basis_out, self.matrix @ other.matrix)

    def __repr__(self) -> str:
        return f"ModeOperator({len(self.basis_out)}×{len(self.basis_in)})"


def apply(op: ModeOperator, state: PureState) -> PureState:
    """Apply an operator to a state over exactly ``op.basis_in``.

    Raises:
        BasisMismatchError: when the state's basis differs from the
            operator's input basis (both bases are named in the message).
    """
    if state.basis != op.basis_in:
        raise BasisMismatchError(
            f"state basis {state.basis!r} does not match operator input basis {op.basis_in!r}"
        )
    return PureState(op.basis_out, op.matrix @ state.amplitudes, require_normalized=False)


# --- state file format -------------------------------------------------------
#
# A pure state serializes to a JSON array of records
#   {"oam": int, "path": int, ["pol": "H"|"V",] "re": float, "im": float}
# sorted in basis order; the basis is implied by the records.


def state_to_json(state: PureState) -> str:
    records = []
    for mode, amp in zip(state.basis, state.amplitudes):
        rec = mode.to_record()
        rec["re"] = float(amp.real)
        rec["im"] = float(amp.imag)
        records.append(rec)
    return json.dumps(records, indent=2) + "\n"


def state_from_json(
    text: str,
    *,
    norm_tolerance: float = NORM_TOLERANCE,
    renormalize: bool = False,
) -> PureState:
    """Parse a state file.

    Args:
        text: JSON array of amplitude records.
        norm_tolerance: accepted deviation of the squared-norm from one.
        renormalize: when true, rescale to exact unit norm after the
            tolerance check (used by the CLI, which accepts 1e-9).
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetlistFormatError(f"state file is not valid JSON: {exc}") from exc
    if not isinstance(payload, list) or not payload:
        raise NetlistFormatError("state file must be a non-empty JSON array of records")
    components: dict[Mode, complex] = {}
    for rec in payload:
        if not isinstance(rec, dict) or "re" not in rec or "im" not in rec:
            raise NetlistFormatError(f"bad amplitude record: {rec!r}")
        mode = Mode.from_record(rec)
        if mode in components:
            raise NetlistFormatError(f"duplicate mode in state file: {mode}")
        components[mode] = complex(float(rec["re"]), float(rec["im"]))
    basis = ModeBasis(components.keys())
    amps = np.array([components[m] for m in basis], dtype=np.complex128)
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > norm_tolerance:
        raise NormalizationError(f"state file norm is {norm!r}, expected 1 ± {norm_tolerance}")
    if renormalize and norm > 0:
        amps = amps / norm
    return PureState(basis, amps, require_normalized=not renormalize)


def phase_of(z: complex) -> float:
    """Argument of a complex number in radians (convenience re-export)."""
    return cmath.phase(z)


def close_to_int(x: float, tolerance: float = 1e-9) -> bool:
    return abs(x - round(x)) <= tolerance


def require_power_of_two(n: int, what: str = "dimension") -> int:
    """Return log₂(n) for exact powers of two, else raise ValueError."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1 or (n & (n - 1)) != 0:
        raise ValueError(f"{what} must be a positive power of two, got {n!r}")
    return n.bit_length() - 1


def log2_int(n: int) -> int:
    """log₂ for exact powers of two (validated)."""
    return require_power_of_two(n)
