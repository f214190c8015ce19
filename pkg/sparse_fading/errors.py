class SparseFadingError(Exception):
    """Base class for every failure raised by sparse_fading"""


class DimensionError(SparseFadingError, ValueError):
    pass


class ParameterError(SparseFadingError, ValueError):
    pass


class DomainError(SparseFadingError, ValueError):
    pass


class DivergenceError(SparseFadingError, ArithmeticError):
    """Moment generating function evaluated outside its region of
    convergence"""


class DegenerateError(SparseFadingError, ValueError):
    pass


class InputError(SparseFadingError, ValueError):
    pass


class InfeasibleError(SparseFadingError, ValueError):
    """No point satisfies the measurement constraint of the program"""


class RankDeficiencyError(SparseFadingError, ArithmeticError):
    pass


class EnumerationBudgetError(SparseFadingError, RuntimeError):
    pass


class ConfigError(SparseFadingError, ValueError):
    pass
