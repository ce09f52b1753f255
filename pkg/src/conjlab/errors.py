"""Exception types raised by conjlab."""


class ConjlabError(ValueError):
    """Base class for all conjlab validation and computation errors."""


class DimensionError(ConjlabError):
    """Shape or subsystem-dimension mismatch."""


class SymmetryError(ConjlabError):
    """Input lacks a required structural property (symmetry, hermiticity, unitarity)."""


class FrameError(ConjlabError):
    """A vector family fails frame completeness or eigenframe requirements."""


class SpectrumError(ConjlabError):
    """Spectra are inequivalent or lack the structure an operation requires."""


class ConfigError(ConjlabError):
    """Malformed JSON document or experiment configuration."""
