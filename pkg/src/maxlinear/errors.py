"""Exception hierarchy shared across the package.

The command-line layer maps these onto exit codes: validation failures
exit with 2, data-driven threshold failures (too few exceedances, no
initial node found, an empty generation pass) with 3, and file-format
problems with 4.
"""

from __future__ import annotations


class MaxLinearError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(MaxLinearError):
    """Structurally invalid input: bad shapes, labels, weights or config."""


class CyclicGraphError(ValidationError):
    """Edge set contains a directed cycle."""


class ThresholdError(MaxLinearError):
    """A tail-based estimate cannot be formed, e.g. fewer positive radii
    than the requested number of upper order statistics."""


class NoInitialNodeError(MaxLinearError):
    """The initial-node search accepted no candidate; tolerances may be
    too tight for the data at hand."""


class EmptyGenerationError(MaxLinearError):
    """A generation pass accepted no node while unordered nodes remain,
    which invalidates the ordering run."""


class FileFormatError(MaxLinearError):
    """An input file does not parse as the documented format."""
