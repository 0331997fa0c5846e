"""
Error types for TSC Graphs
Each failure named by an operation has its own class so callers can react precisely
"""
from typing import Any, Dict


class TscError(Exception):
    """Base class for every domain error"""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        return {
            'error': type(self).__name__,
            'message': self.message,
            'details': {k: _plain(v) for k, v in self.details.items()}
        }


def _plain(value: Any) -> Any:
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, 'item'):
        return value.item()
    return value


class ConfigurationError(TscError):
    pass


# Field construction and arithmetic
class NotPrime(TscError):
    pass


class ModulusReducible(TscError):
    pass


class NotPrimitive(TscError):
    pass


class FieldTooLarge(TscError):
    pass


class ZeroHasNoLog(TscError):
    pass


class DivisionByZero(TscError):
    pass


# Graph construction
class NotEdgeWellDefined(TscError):
    pass


class BadPartition(TscError):
    pass


class SingularGenerator(TscError):
    pass


class BadRecoloring(TscError):
    pass


# Semilinear groups
class NotStandardForm(TscError):
    pass


# Symmetry and search
class NotColorPermuting(TscError):
    """A map sends two elements of one color class to different classes"""

    def __init__(self, message: str, witness=None, **details: Any):
        super().__init__(message, witness=witness, **details)
        self.witness = witness


class EnumerationTooLarge(TscError):
    pass


class ImpossibleTarget(TscError):
    pass


class NotBinaryField(TscError):
    pass


class InvalidSearchConfig(TscError):
    pass


# Reports and files
class UnknownCase(TscError):
    pass


class ParseError(TscError):
    pass
