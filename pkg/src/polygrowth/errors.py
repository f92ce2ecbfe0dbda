class PolygrowthError(Exception):
    pass


class DimensionMismatch(PolygrowthError, ValueError):
    pass


class HalfRootNotExact(PolygrowthError):
    """An exact value was requested from a node that only has approximate values."""


class ParseError(PolygrowthError, ValueError):
    def __init__(self, message: str, location: str = ""):
        self.location = location or "/"
        super().__init__(f"{self.location}: {message}")


class QuotientNotInferable(PolygrowthError):
    pass


class EmptyList(PolygrowthError, ValueError):
    pass


class VanishesAtK(PolygrowthError, ValueError):
    pass


class EqualPoints(PolygrowthError, ValueError):
    pass


class BudgetExceeded(PolygrowthError):
    pass
