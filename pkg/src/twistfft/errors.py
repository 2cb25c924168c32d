"""Exception types shared across the package."""


class TwistFFTError(Exception):
    """Base class for all package-specific errors."""


class BasisMismatchError(TwistFFTError):
    """An operator was applied to a state over a different basis."""


class NormalizationError(TwistFFTError):
    """A state vector failed its norm requirement."""


class ContractDomainError(TwistFFTError):
    """A mode label lies outside a behavioral block's contract domain."""


class BasisEscapeError(TwistFFTError):
    """An element mapped a label outside the explicitly supplied basis."""


class ClosureOverflowError(TwistFFTError):
    """Reachability closure exceeded the configured label cap."""


class SchemeParameterError(TwistFFTError):
    """Invalid dimension/variant combination for a synthesis request."""


class NetlistFormatError(TwistFFTError):
    """A netlist or state document failed to parse or validate."""
