class VortexSheetError(Exception):
    pass


class InvalidParameterError(VortexSheetError, ValueError):
    """A physical constraint of the model is violated."""


class DomainError(InvalidParameterError):
    """A state lies outside the validity interval of the equation of state."""


class EosViolationError(InvalidParameterError):
    """The pressure law breaks p > 0 or 0 < p' < 1/eps^2."""


class DegenerateFrontError(InvalidParameterError):
    """The front slopes give varrho^2 + varsigma^2 = 0."""


class PoleError(VortexSheetError, ArithmeticError):
    def __init__(self, message, side=None):
        super(PoleError, self).__init__(message)
        self.side = side


class ConvergenceError(VortexSheetError):
    def __init__(self, message, data=None):
        super(ConvergenceError, self).__init__(message)
        self.data = data if data is not None else {}


class DegeneracyError(VortexSheetError):
    pass


class NearImaginarySpectrumError(VortexSheetError):
    """Raised by stable_subspace; use the explicit boundary extension of omega instead."""


class IntegrationError(VortexSheetError):
    pass


class VerificationError(VortexSheetError):
    def __init__(self, message, property_name=None):
        super(VerificationError, self).__init__(message)
        self.property_name = property_name


class DefectiveMatrixWarning(UserWarning):
    pass
