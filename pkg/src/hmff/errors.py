"""Exception hierarchy. Each family maps to one CLI exit code."""


class HmffError(Exception):
    exit_code = 1


class ConfigError(HmffError, ValueError):
    exit_code = 2


class DataError(HmffError, ValueError):
    exit_code = 3


class NumericError(HmffError, ArithmeticError):
    exit_code = 4


class InvalidConfig(ConfigError):
    pass


class EmptyCorpus(DataError):
    pass


class AllDocumentsEmpty(EmptyCorpus):
    pass


class DuplicateId(DataError):
    pass


class MissingToken(DataError):
    pass


class WordWithZeroDf(DataError):
    pass


class NotADistribution(DataError):
    pass


class SingleDocument(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class TooFewPoints(DataError):
    pass


class NonFiniteFeature(DataError):
    pass


class SingleCluster(DataError):
    pass


class EmptyInput(DataError):
    pass


class NotSymmetric(NumericError):
    pass


class ConvergenceFailure(NumericError):
    pass
