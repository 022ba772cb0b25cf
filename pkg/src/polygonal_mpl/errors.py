"""Exception hierarchy shared by all modules.

Every error carries a short machine-readable ``code`` so the CLI can map it
to an exit status without string matching.
"""


class MPLError(Exception):
    code = "error"


class PoleAtPoint(MPLError):
    code = "pole"


class ZeroInput(MPLError):
    code = "zero-input"


class ZeroEntry(MPLError):
    code = "zero-entry"


class NonHomogeneous(MPLError):
    code = "non-homogeneous"


class DegenerateArgument(MPLError):
    code = "degenerate-argument"


class SingularEntry(MPLError):
    code = "singular-entry"

    def __init__(self, message, slot=None):
        super().__init__(message)
        self.slot = slot


class SingularTerm(MPLError):
    code = "singular-term"

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class KindMismatch(MPLError):
    code = "kind-mismatch"


class EndpointMismatch(MPLError):
    code = "endpoint-mismatch"


class UnsupportedComposition(MPLError):
    code = "unsupported-composition"

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class BadIndexList(MPLError):
    code = "bad-index-list"


class NoQuadrangulation(MPLError):
    code = "no-quadrangulation"


class InfeasibleMultiset(MPLError):
    code = "infeasible-multiset"


class DecorationMismatch(MPLError):
    code = "decoration-mismatch"


class ScaleExceeded(MPLError):
    code = "scale-exceeded"

    def __init__(self, message, unknowns=None, weight=None):
        super().__init__(message)
        self.unknowns = unknowns
        self.weight = weight


class UndefinedSubstitution(MPLError):
    code = "undefined-substitution"


class IsolationFailed(MPLError):
    code = "isolation-failed"


class OutsideDomain(MPLError):
    code = "outside-domain"


class PrecisionUnreachable(MPLError):
    code = "precision-unreachable"


class ParseError(MPLError):
    code = "parse"
