from typing import Optional


class LayerLatError(Exception):
    """
    Base class of every domain error raised by layerlat
    """


class TypeMismatch(LayerLatError, TypeError):
    pass


class ParseError(LayerLatError, ValueError):
    """
    Raised for malformed bunch, element, table or embedding documents.
    Carries the position (line) and the field path when known
    """

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        field: Optional[str] = None,
    ) -> None:
        self.message = message
        self.line = line
        self.field = field
        super().__init__(str(self))

    def __str__(self) -> str:
        position = []
        if self.line is not None:
            position.append(f"line {self.line}")
        if self.field is not None:
            position.append(f"field {self.field}")
        if position:
            return f"{', '.join(position)}: {self.message}"
        return self.message


class UnknownLayer(LayerLatError, KeyError):
    def __str__(self) -> str:
        return f"unknown layer {self.args[0]!r}"


class LayerOrderError(LayerLatError):
    pass


class CoverMissing(LayerLatError):
    pass


class NotResiduated(LayerLatError):
    pass


class AxiomFailure(LayerLatError):
    """
    An FL_e axiom failed on a finite table; `witness` holds the offending
    indices
    """

    def __init__(self, message: str, witness: tuple = ()) -> None:
        self.witness = witness
        super().__init__(message)


class NotInvolutive(AxiomFailure):
    pass


class NotOddOrEven(AxiomFailure):
    pass


class RoundTripMismatch(LayerLatError):
    def __init__(self, message: str, cell: tuple = ()) -> None:
        self.cell = cell
        super().__init__(message)


class LayerClassError(LayerLatError):
    pass


class LeastLayerError(LayerLatError):
    pass


class EvenTypeUnsupported(LayerLatError):
    pass


class NotLess(LayerLatError):
    pass


class Unbounded(LayerLatError):
    pass


class BoundExceeded(LayerLatError):
    pass
