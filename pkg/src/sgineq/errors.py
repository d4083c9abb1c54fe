"""Shared exception hierarchy.

HypothesisViolationError marks inputs that are well-formed but break a
mathematical hypothesis of the statement being checked (non-normalized
semigroup, non-positive dual, ill-conditioned exponent midpoint). The
command line maps these to exit code 2, everything else that is wrong
with a config to exit code 64.
"""


class SgineqError(Exception):
    """Base class for all library errors."""


class HypothesisViolationError(SgineqError):
    """A stated hypothesis of the inequality under test does not hold."""
