"""
ks_flowlab.errors

Exception hierarchy shared by every module of the laboratory.
"""


class FlowLabError(Exception):
    """Root of all ks_flowlab errors"""


class InvalidInputError(FlowLabError, ValueError):
    """Raised when an argument violates the precondition of an operation"""


class UnknownTagError(InvalidInputError):
    """Raised when a constructor tag does not resolve to a registered builder"""

    def __init__(self, kind, tag, known=()):
        self.kind = kind
        self.tag = tag
        self.known = tuple(known)
        message = "Unknown {} tag {!r}".format(kind, tag)
        if self.known:
            message += " (known: {})".format(", ".join(self.known))
        super(UnknownTagError, self).__init__(message)


class UnsupportedTargetError(FlowLabError):
    """Raised when an operation needs a linear (normed) target"""


class MassLeakError(FlowLabError):
    """Raised when particles fall outside a density grid"""

    def __init__(self, leaked_fraction, message=None):
        self.leaked_fraction = float(leaked_fraction)
        if message is None:
            message = "Density grid misses {:.3e} of the total mass".format(
                self.leaked_fraction)
        super(MassLeakError, self).__init__(message)
