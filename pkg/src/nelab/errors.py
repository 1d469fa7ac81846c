"""Exception types shared across the package."""


class NelabError(Exception):
    """Base class for package-specific failures."""


class DegenerateBodyError(NelabError, ValueError):
    """Convex body is a single point (or empty) and cannot be used."""


class SamplerExhausted(NelabError, RuntimeError):
    """Rejection sampler hit its retry budget without an accepted point."""


class DomainError(NelabError, ValueError):
    """A point lies outside the convex body it was claimed to belong to."""


class ParameterError(NelabError, ValueError):
    """Structurally inconsistent arguments (mismatched net, bad radii, ...)."""


class EstimationError(NelabError, RuntimeError):
    """A sampling estimator found no admissible sample to work with."""


class GeometryError(NelabError, ValueError):
    """No admissible geometric configuration exists (e.g. no far point pair)."""


class GaugeError(NelabError, ValueError):
    """A gauge violates its contract or a gauge construction failed."""


class RangeError(NelabError, ValueError):
    """A requested value lies outside the range of a monotone function."""


class LadderExhausted(NelabError, RuntimeError):
    """A scale ladder ran out of rungs; extend it and retry."""
