"""Exception hierarchy shared across the package.

Grouped so the CLI can map failures to exit codes: configuration problems
exit 2, numerical failures (CFL, unexpected blow-up, cone leaving the
domain) exit 3, failed experiments exit 1.
"""


class RwlError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(RwlError):
    """Malformed or inconsistent run configuration."""


# -- exponent bundle ---------------------------------------------------------

class SubcriticalExponent(RwlError):
    """p <= 5 was supplied; the whole setup assumes p > 5."""


class NonpositiveScale(RwlError):
    """A scaling factor must be strictly positive."""


# -- grids and quadrature ----------------------------------------------------

class GridTooSmall(RwlError):
    """Too few nodes for the requested finite-difference stencil."""


class BadInterval(RwlError):
    """Integration interval is reversed or leaves the sampled domain."""


# -- profile representation --------------------------------------------------

class DomainTooSmall(RwlError):
    """Profile half-width L is smaller than the radial domain."""


class CausalWindowExceeded(RwlError):
    """|t| + r_max exceeds the profile half-width L."""


class NegativeRadius(RwlError):
    """An exterior radius must be >= 0."""


# -- energies ----------------------------------------------------------------

class ConeLeftDomain(RwlError):
    """The exterior cone R + |t| exceeds the sampled radius."""


class DecayViolated(RwlError):
    """Data do not decay enough at r_max for the spectral norm."""


# -- cutoffs -----------------------------------------------------------------

class BadRadius(RwlError):
    """Cutoff radius outside the admissible range."""


# -- time evolution ----------------------------------------------------------

class CFLViolation(RwlError):
    """dt_ratio must lie in (0, 1]."""


class CausalClosureViolated(RwlError):
    """Data support can reach r_max before t_end; the run would see the wall."""


class PreconditionViolated(RwlError):
    """Inputs disagree where they were required to coincide."""


class BlowupEncountered(RwlError):
    """A trajectory blew up where a global solution was required."""


# -- stationary solutions ----------------------------------------------------

class ZeroEll(RwlError):
    """The asymptotic coefficient ell must be nonzero."""


class SeriesRegionExceeded(RwlError):
    """Starting abscissa too large for the two-term series initializer."""


NUMERICAL_FAILURES = (
    CFLViolation,
    CausalClosureViolated,
    CausalWindowExceeded,
    ConeLeftDomain,
    BlowupEncountered,
    DecayViolated,
)
