"""Shared exception types."""


class BudgetExceededError(RuntimeError):
    """An exact-enumeration or exact-convolution route refused to run
    because the requested problem size exceeds its configured budget."""


class TripleSearchError(ValueError):
    """No admissible digit-sum triple exists in the requested window.

    The ``report`` attribute records which condition blocked the search.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or message
