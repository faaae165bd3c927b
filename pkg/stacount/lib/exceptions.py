class SlownessException(Exception):
    """Raised when things are too slow."""

    def __init__(self, message):
        Exception.__init__(self, message)


class ParsingException(Exception):
    """Raised when parsing fails."""

    def __init__(self, message):
        Exception.__init__(self, message)


class InsanityException(Exception):
    """Raised when data validation fails."""

    def __init__(self, message):
        Exception.__init__(self, message)


class BudgetExceededException(Exception):
    """Raised when the solver reaches its step limit without a verdict."""

    def __init__(self, message, steps=None):
        Exception.__init__(self, message)
        self.steps = steps


class OracleRefusalException(Exception):
    """Raised when the exact counter will not produce a count. We never hand
    back a truncated count instead."""

    def __init__(self, message):
        Exception.__init__(self, message)


class UnusableDepthException(Exception):
    """Raised when a depth cannot produce an estimate (proportion 0 or 1)."""

    def __init__(self, message):
        Exception.__init__(self, message)
