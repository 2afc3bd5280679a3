# Errores de decodificación


class DecoderError(Exception):
    """Error base de todos los decodificadores"""


class DimensionError(DecoderError, ValueError):
    """Operadores o vectores con tamaños incompatibles"""


class ParameterError(DecoderError, ValueError):
    """Parámetro fuera de rango (distancia, tasa de error, chi)"""


class PreconditionError(DecoderError, ValueError):
    """La entrada no cumple la precondición de la operación"""


class SizeLimitError(DecoderError):
    """Enumeración exhaustiva demasiado grande"""


class SingularUpdateError(DecoderError):
    """Matriz (M+A) numéricamente singular en la evolución gaussiana"""


class DegenerateStateError(DecoderError):
    """Estado MPS idénticamente nulo"""


class NumericalInvariantError(DecoderError):
    """Invariante numérico roto (indica un error interno)"""
