"""Exception types raised across the toolkit."""


class InvtagError(Exception):
    """Base class for errors raised by this package."""


class UnknownLabel(InvtagError):
    """A raw label is not present in the label mapping."""

    def __init__(self, raw_label: str):
        super().__init__(f"label {raw_label!r} is not in the mapping")
        self.raw_label = raw_label


class DuplicateTarget(InvtagError):
    """The revision target already appears in the known label/value context."""

    def __init__(self, label_word: str):
        super().__init__(f"target {label_word!r} already appears in the known context")
        self.label_word = label_word


class EmptyAllowedSet(InvtagError):
    """Constrained decoding was given no candidate tokens."""


class ScorerFailure(InvtagError):
    """A language-model scorer could not produce usable scores."""


class ConflictingGold(InvtagError):
    """Two gold examples force different continuations for the same context."""

    def __init__(self, context: str, existing: str, conflicting: str):
        super().__init__(
            f"context {context!r} maps to both {existing!r} and {conflicting!r}"
        )
        self.context = context
        self.existing = existing
        self.conflicting = conflicting


class LengthMismatch(InvtagError):
    """Parallel sequences differ in length."""


class MissingPrediction(InvtagError):
    """An episode query sentence has no matching prediction."""


class EmptyInput(InvtagError):
    """An aggregate was requested over zero reports."""


class ParseError(InvtagError):
    """A data file is malformed; carries the offending location."""

    def __init__(self, message: str, *, line_no: int | None = None, path: str | None = None):
        self.line_no = line_no
        self.path = path
        where = ""
        if line_no is not None:
            where = f" (line {line_no})"
        elif path is not None:
            where = f" (at {path})"
        super().__init__(f"{message}{where}")


class SupportInfeasible(InvtagError):
    """The corpus cannot supply k instances of some label."""

    def __init__(self, label: str, *, needed: int | None = None, available: int | None = None):
        detail = ""
        if needed is not None:
            detail = f": need {needed}, corpus has {available}"
        super().__init__(f"cannot build a support set covering label {label!r}{detail}")
        self.label = label


class FixtureMismatch(InvtagError):
    """A frozen fixture no longer replays to its expected output."""

    def __init__(self, name: str, detail: str = ""):
        suffix = f": {detail}" if detail else ""
        super().__init__(f"fixture {name!r} does not match its frozen expectation{suffix}")
        self.name = name
