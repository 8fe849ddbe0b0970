"""
Exception hierarchy for afkit.

Library code raises these; only the command-line front end turns them into
exit codes (see ``exit_code``).
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_CAP = 3


class AfkitError(Exception):
    """Base class for all afkit errors."""

    exit_code = EXIT_USAGE


# ---------- Input / parse errors ----------

class GraphFormatError(AfkitError):
    """Malformed graph text file."""


class LoopEdgeError(AfkitError):
    def __init__(self, vertex):
        super().__init__(f"loop edge at vertex {vertex}")
        self.vertex = vertex


class DuplicateEdgeError(AfkitError):
    def __init__(self, u, v):
        super().__init__(f"duplicate edge ({u}, {v})")
        self.edge = (u, v)


class BadVertexError(AfkitError):
    def __init__(self, vertex, vertex_count):
        super().__init__(f"vertex {vertex} out of range for a graph on {vertex_count} vertices")
        self.vertex = vertex
        self.vertex_count = vertex_count


class BadFaceSetError(AfkitError):
    """A face boundary is not a cycle of the graph, or faces are duplicated/missing."""


class ChainSyntaxError(AfkitError):
    """Chain spec string does not follow the ``L`` / ``L@d`` grammar."""


class OddLengthError(ChainSyntaxError):
    def __init__(self, length):
        super().__init__(f"face length {length} must be even and at least 4")
        self.length = length


class OffsetOutOfRangeError(ChainSyntaxError):
    def __init__(self, offset, length):
        super().__init__(f"offset {offset} out of range 0..{length - 2} for a face of length {length}")
        self.offset = offset
        self.length = length


class MissingOffsetError(ChainSyntaxError):
    def __init__(self, position):
        super().__init__(f"internal face {position} needs an offset (L@d)")
        self.position = position


class UnexpectedOffsetError(ChainSyntaxError):
    def __init__(self, position):
        super().__init__(f"terminal face {position} must not carry an offset")
        self.position = position


class BadModesError(AfkitError):
    """Generator mode string has the wrong length or unknown letters."""


class MissingSeedError(AfkitError):
    """Random generation requested without an explicit seed."""


# ---------- Precondition failures ----------

class DisconnectedGraphError(AfkitError):
    """Operation is defined only for connected graphs."""


class NoPerfectMatchingError(AfkitError):
    """The graph has no perfect matching."""


class NotPerfectMatchingError(AfkitError):
    """The given edge set is not a perfect matching of the graph."""


class NotAlternatingError(AfkitError):
    """The given cycle is not alternating with respect to the matching."""


class NotElementaryError(AfkitError):
    """Operation requires an elementary bipartite graph."""


# ---------- Verification / resource errors ----------

class VerificationError(AfkitError):
    """An internal self-check or cross-check failed."""

    exit_code = EXIT_MISMATCH


class CapExceededError(AfkitError):
    """An enumeration produced more objects than its cap allows."""

    exit_code = EXIT_CAP

    def __init__(self, cap, what="objects"):
        super().__init__(f"more than {cap} {what}; raise the cap to continue")
        self.cap = cap
        self.what = what
