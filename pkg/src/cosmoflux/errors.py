"""Exception taxonomy. Each class maps to one CLI exit code family."""

from __future__ import annotations


class CosmofluxError(Exception):
    """Base class for all package errors."""


class ConfigError(CosmofluxError):
    """Invalid or unknown configuration (exit code 1)."""


class VerificationError(CosmofluxError):
    """A physics identity failed beyond its tolerance (exit code 2)."""


class LeakageError(CosmofluxError):
    """Truncation leakage exceeds the configured budget (exit code 3)."""


class NumericError(CosmofluxError):
    """Double-precision evaluation is unreliable at these parameters (exit code 3)."""


class EntropyUndefinedError(CosmofluxError):
    """Entropy quantities have no scale on the T = 0 vacuum path (exit code 2)."""
