"""Exception types raised across the package."""


class HeunError(Exception):
    """Base class for all package errors."""


class DegenerateLattice(HeunError):
    pass


class PoleAtArgument(HeunError):
    pass


class NotOnCurve(HeunError):
    pass


class KernelDimError(HeunError):
    pass


class NotConstant(HeunError):
    pass


class EliminationCollapse(HeunError):
    pass


class InconsistentCovering(HeunError):
    pass


class AtBranchPoint(HeunError):
    pass


class CollidingRoots(HeunError):
    pass


class Unclassified(HeunError):
    pass


class BranchLost(HeunError):
    pass


class PoleOnPath(HeunError):
    pass


class StiffFailure(HeunError):
    pass
