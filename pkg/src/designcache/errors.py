"""Exception hierarchy.

Construction and precondition failures raise; verification problems are
reported as fields of the report objects instead.
"""


class DesignCacheError(Exception):
    """Base class for every error raised by this package."""

    code = "DesignCacheError"


class NotPrimePower(DesignCacheError, ValueError):
    code = "NotPrimePower"


class UnsupportedField(DesignCacheError, ValueError):
    code = "UnsupportedField"


class UnsupportedBlockSize(DesignCacheError, ValueError):
    code = "UnsupportedBlockSize"


class UnknownFixture(DesignCacheError, KeyError):
    code = "UnknownFixture"

    def __str__(self):
        return str(self.args[0]) if self.args else self.code


class NonIntegral(DesignCacheError, ValueError):
    code = "NonIntegral"


class InvalidDesign(DesignCacheError, ValueError):
    code = "InvalidDesign"


class NotBIBD(InvalidDesign):
    code = "NotBIBD"


class NotSteiner(InvalidDesign):
    code = "NotSteiner"


class NotSymmetric(InvalidDesign):
    code = "NotSymmetric"


class NotLambda2(InvalidDesign):
    code = "NotLambda2"


class RepeatedBlocks(InvalidDesign):
    code = "RepeatedBlocks"


class BlockSizeBelowGroupSize(InvalidDesign):
    code = "BlockSizeBelowGroupSize"


class InvalidMatrix(DesignCacheError, ValueError):
    code = "InvalidMatrix"


class SubpacketizationMismatch(DesignCacheError, ValueError):
    code = "SubpacketizationMismatch"


class MissingSideInformation(DesignCacheError, RuntimeError):
    """A decoder needed a subfile that its cache does not hold.

    Only reachable when an invalid cover is fed to the simulator.
    """

    code = "MissingSideInformation"
