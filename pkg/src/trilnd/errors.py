class MixedContext(ValueError):
    """Operands belong to different trinomial algebras."""


class NotHomogeneous(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class IndexOutOfRange(IndexError):
    pass
