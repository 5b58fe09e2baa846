"""Exception types shared across the package.

Every domain error carries an optional ``witness`` that is JSON-serializable,
so the CLI can report it verbatim.
"""
from __future__ import annotations

from typing import Any


class CubeCatError(Exception):
    """Base class for domain errors (CLI exit code 1)."""

    def __init__(self, message: str = "", witness: Any = None):
        super().__init__(message or self.__class__.__name__)
        self.witness = witness

    @property
    def name(self) -> str:
        return self.__class__.__name__

    def to_json(self) -> dict:
        out = {"error": self.name, "message": str(self)}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


class InvalidPoset(CubeCatError):
    pass


class IncomparableEndpoints(CubeCatError):
    pass


class NotMonotone(CubeCatError):
    pass


class ArityTooLarge(CubeCatError):
    pass


class ArityMismatch(CubeCatError):
    pass


class DegreeMismatch(CubeCatError):
    pass


class IndexOutOfRange(CubeCatError):
    pass


class NotBoxplus(CubeCatError):
    pass


class MalformedDecomposition(CubeCatError):
    pass


class NotSurjective(CubeCatError):
    pass


class IsMonotone(CubeCatError):
    pass


class PreservesOneDimIntervals(CubeCatError):
    pass


class SizeExceeded(CubeCatError):
    pass


class NotMeetSemilattice(CubeCatError):
    pass


class NotFaceClosed(CubeCatError):
    pass
