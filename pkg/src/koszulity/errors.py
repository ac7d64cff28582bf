"""Exception hierarchy shared by the whole package.

Two failure kinds are kept apart on purpose: `InputError` means the caller
handed us something malformed (CLI exit code 2), while `Refusal` means the
request was well-formed but falls outside the certified range of a truncated
computation (CLI exit code 1).
"""


class KoszulityError(Exception):
    pass


class InputError(KoszulityError):
    """Malformed input: bad presentation, bad tables, bad dimensions."""


class Refusal(KoszulityError):
    """Well-formed request outside the certified/truncated range."""
