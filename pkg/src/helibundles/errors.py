"""Exception types shared across the library."""


class HelibundlesError(Exception):
    """Base class for all library errors."""


class ZeroMomentum(HelibundlesError):
    """The zero momentum is excluded: the forward lightcone has a hole at the origin."""


class ChartSingularity(HelibundlesError):
    """A chart was evaluated too close to its excluded pole."""


class ResolutionTooLow(HelibundlesError):
    """Mesh resolution parameters are below the supported minimum."""


class ModeMismatch(HelibundlesError):
    """Operation applied to a fiber representation mode it does not support."""


class FiberMismatch(HelibundlesError):
    """Inner product requested between elements of different fibers."""


class DegenerateOverlap(HelibundlesError):
    """Link overlap too small to carry a reliable phase (points too far apart)."""


class AdmissibilityViolation(HelibundlesError):
    """Mesh too coarse for the requested helicity: plaquette phases can alias."""


class AliasingRisk(HelibundlesError):
    """Equator sampling too sparse: a phase increment is too large to trust."""


class NotPhotonMode(HelibundlesError):
    """Boosts act on explicit photon (h = +1 or -1) elements only."""


class InvalidLorentz(HelibundlesError):
    """Matrix is not in the proper orthochronous Lorentz group."""


class NonLinearPhase(HelibundlesError):
    """Helicity fit rejected: the rotation phase is not linear in the angle."""
