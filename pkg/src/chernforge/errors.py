"""Exception hierarchy shared by all chernforge modules."""


class ChernForgeError(Exception):
    """Base class for every error raised by chernforge."""


class SingularMatrix(ChernForgeError):
    pass


class DuplicateNodes(ChernForgeError):
    pass


class UnknownGenerator(ChernForgeError):
    pass


class ModelMismatch(ChernForgeError):
    pass


class PartitionOutOfBox(ChernForgeError):
    pass


class UnknownSymbol(ChernForgeError):
    pass


class NotSymmetric(ChernForgeError):
    pass


class IndexOutOfRange(ChernForgeError):
    pass


class DegreeMismatch(ChernForgeError):
    pass


class RankMismatch(ChernForgeError):
    pass
