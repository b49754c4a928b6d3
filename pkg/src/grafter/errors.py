"""Exception hierarchy shared by every layer of the engine."""

from __future__ import annotations


class GrafterError(Exception):
    """Base class; the CLI maps every subclass to exit status 2."""


class TermSyntaxError(GrafterError):
    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.text = text
        self.pos = pos
        if pos is not None and text:
            message = f"{message} at column {pos + 1}: {text!r}"
        super().__init__(message)


class UnknownGenerator(GrafterError):
    pass


class UnknownFootpath(GrafterError):
    pass


class ArityMismatch(GrafterError):
    pass


class InvalidPlant(GrafterError):
    pass


class KTooLarge(GrafterError):
    pass


class EmptyAlphabet(GrafterError):
    pass


class FormatError(GrafterError):
    pass


class AlphabetMismatch(GrafterError):
    pass


class IllTyped(GrafterError):
    pass


class VerticalMismatch(IllTyped):
    pass


class ContextArityMismatch(IllTyped):
    pass


class NotParallel(GrafterError):
    pass


class UnassignedGenerator(GrafterError):
    pass


class UnassignedComponent(GrafterError):
    pass


class MissingAddition(GrafterError):
    pass
