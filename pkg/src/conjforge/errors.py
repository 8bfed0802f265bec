"""Exceptions shared by the reduction and the matrix oracle."""


class NotSimpleCase(Exception):
    """Some simple entry is zero."""


class NotConjugate(Exception):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}: {detail}" if detail else reason)
        self.reason = reason
        self.detail = detail
