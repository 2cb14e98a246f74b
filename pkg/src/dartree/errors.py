"""Exception hierarchy.

Every error carries a message naming the violated invariant; the CLI maps
any :class:`DartreeError` to exit code 3.
"""


class DartreeError(Exception):
    """Base class for all package errors."""


# trees
class TreeError(DartreeError, ValueError):
    pass


class MultipleRoots(TreeError):
    pass


class OrphanVertex(TreeError):
    pass


class DuplicateVertex(TreeError):
    pass


class CycleDetected(TreeError):
    pass


class LeafBeforeTruncation(TreeError):
    pass


class BranchingBeyondIndexBound(TreeError):
    pass


class VertexBeyondTruncation(TreeError):
    pass


class InvalidParameter(TreeError):
    pass


# product
class DepthBoundExceedsFactor(DartreeError, ValueError):
    pass


class RootHasNoParent(DartreeError, ValueError):
    pass


class VertexNotInPhiF(DartreeError, ValueError):
    pass


# multishift
class TruncationOverflow(DartreeError):
    pass


class NotLeftInvertible(DartreeError):
    pass


class IrrationalWeightRatios(DartreeError):
    pass


# cokernel
class EmptyF(DartreeError, ValueError):
    pass


class DepthTooShallow(DartreeError, ValueError):
    pass


# model
class PointOutsideDomain(DartreeError, ValueError):
    pass


class WrongRegime(DartreeError, ValueError):
    pass


# classify
class FactorCountMismatch(DartreeError, ValueError):
    pass


class NotIsomorphic(DartreeError):
    pass


class TruncationTooShallow(DartreeError, ValueError):
    pass


class UndecidedCase(DartreeError):
    pass
