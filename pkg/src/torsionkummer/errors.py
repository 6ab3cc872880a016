"""Exception hierarchy shared by every module of the package."""


class TorsionKummerError(Exception):
    """Base class for all errors raised by torsionkummer."""


class DimensionMismatch(TorsionKummerError, ValueError):
    pass


class NotInvertible(TorsionKummerError, ValueError):
    pass


class ShapeMismatch(TorsionKummerError, ValueError):
    pass


class NotADivisor(TorsionKummerError, ValueError):
    pass


class CapExceeded(TorsionKummerError):
    """An enumeration would exceed the configured element cap."""


class OracleSizeLimit(TorsionKummerError):
    """A brute-force oracle was asked to work above its dimension limit."""


class NotRStable(TorsionKummerError, ValueError):
    pass


class PreconditionFailed(TorsionKummerError, ValueError):
    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        msg = f"precondition failed: {hypothesis}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class PrecisionInsufficient(TorsionKummerError):
    """An algebra exponent could not be certified below the working precision."""

    def __init__(self, prime: int, precision: int):
        self.prime = prime
        self.precision = precision
        super().__init__(
            f"algebra closure mod {prime}^{precision} does not contain "
            f"{prime}^m Mat for any m < {precision}; retry at higher precision"
        )


class RankZero(TorsionKummerError, ValueError):
    pass


class WrongRecordKind(TorsionKummerError, ValueError):
    """A CM operation received a non-CM record or vice versa."""


class CMRecord(WrongRecordKind):
    """A non-CM operation received a CM record."""


class NonCMRecord(WrongRecordKind):
    """A CM operation received a non-CM record."""


class MissingGrowthParam(TorsionKummerError, KeyError):
    def __init__(self, prime: int):
        self.prime = prime
        super().__init__(f"no parameter of maximal growth n_{prime} supplied")

    def __str__(self) -> str:
        return self.args[0]


class MissingCartanParams(TorsionKummerError, KeyError):
    def __init__(self, prime: int):
        self.prime = prime
        super().__init__(f"no Cartan parameters (gamma, delta) supplied for {prime}")

    def __str__(self) -> str:
        return self.args[0]


class CMOverBaseField(TorsionKummerError, ValueError):
    pass


class ParseError(TorsionKummerError, ValueError):
    pass


class SchemaError(TorsionKummerError, ValueError):
    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")
