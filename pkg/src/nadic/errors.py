"""Exception types. Each carries a short kebab-case ``name`` used by the CLI."""


class NadicError(ValueError):
    name = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.name)


class InvalidArgument(NadicError):
    name = "invalid-argument"


class InvalidDigit(NadicError):
    name = "invalid-digit"


class InvalidCharacter(NadicError):
    name = "invalid-character"

    def __init__(self, message: str = "", position: int | None = None):
        super().__init__(message)
        self.position = position


class NotInvertible(NadicError):
    name = "not-invertible"

    def __init__(self, message: str = "", prime: int | None = None):
        super().__init__(message)
        self.prime = prime


class DenominatorNotUnit(NadicError):
    name = "denominator-not-unit"


class UnsupportedPrime2(NadicError):
    name = "unsupported-prime-2"


class NonUnit(NadicError):
    name = "non-unit"


class NoSquareRoot(NadicError):
    name = "no-square-root"

    def __init__(self, message: str = "", prime: int | None = None):
        super().__init__(message)
        self.prime = prime


class OutsideConvergenceRadius(NadicError):
    name = "outside-convergence-radius"

    def __init__(self, message: str = "", prime: int | None = None):
        super().__init__(message)
        self.prime = prime


class NotPeriodic(NadicError):
    name = "not-periodic"


class InvalidFamily(NadicError):
    name = "invalid-family"


class DegenerateSquare(NadicError):
    name = "degenerate-square"


class NotCoprime(NadicError):
    name = "not-coprime"


class UnsupportedShape(NadicError):
    name = "unsupported-shape"
