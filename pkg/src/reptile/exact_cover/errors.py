class BudgetExhausted(RuntimeError):
    """A search hit a node, time or solution limit before finishing.

    ``partial_count`` is the number of solutions seen so far; ``complete`` is
    always False and exists so reports can carry it verbatim.
    """

    def __init__(self, message, nodes=0, partial_count=0, reason="nodes"):
        super().__init__(message)
        self.nodes = nodes
        self.partial_count = partial_count
        self.reason = reason
        self.complete = False


class CacheOverflow(MemoryError):
    """The memo table of the cached counter outgrew its byte cap."""

    def __init__(self, message, entries=0, bytes=0, nodes=0):
        super().__init__(message)
        self.entries = entries
        self.bytes = bytes
        self.nodes = nodes
