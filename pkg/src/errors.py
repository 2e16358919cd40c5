"""
Exception hierarchy. Library code raises these; the report layer turns them
into result dicts with an "error" entry.
"""

from __future__ import annotations


class GallaiRamseyError(Exception):
    """Base class for every error raised by this package."""

    def to_dict(self) -> dict:
        return {"type": type(self).__name__, "message": str(self)}


class ColoringError(GallaiRamseyError):
    pass


class GecParseError(ColoringError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload["line"] = self.line
        return payload


class WitnessUnavailable(GallaiRamseyError):
    """No verified witness is cached for the requested Ramsey pair and order."""

    def __init__(self, s: int, t: int, n: int | None = None, message: str | None = None):
        text = message or f"no verified ({s},{t}) witness" + (f" of order {n}" if n is not None else "") + " available"
        super().__init__(text)
        self.s = s
        self.t = t
        self.n = n

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload.update({"s": self.s, "t": self.t, "n": self.n})
        return payload


class InvalidWitness(GallaiRamseyError):
    pass


class RainbowTriangleError(GallaiRamseyError):
    def __init__(self, triangle: tuple[int, int, int]):
        super().__init__(f"coloring has a rainbow triangle {triangle}")
        self.triangle = tuple(triangle)

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload["triangle"] = list(self.triangle)
        return payload


class PartitionLimitError(GallaiRamseyError):
    pass


class PartitionNotFoundError(GallaiRamseyError):
    pass


class CertificateError(GallaiRamseyError):
    pass


class InadmissibleTransformError(GallaiRamseyError):
    pass


class UnsupportedPairError(GallaiRamseyError):
    pass


class SearchSpaceTooLarge(GallaiRamseyError):
    pass
