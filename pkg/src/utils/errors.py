"""
Jerarquía de excepciones del laboratorio.

Los códigos de salida del CLI se derivan de la rama de la jerarquía:
ConfigError -> 2, NumericalError -> 3, AcceptanceFailure -> 4.
"""


class WaveTraceError(Exception):
    """Excepción base del paquete."""

    exit_code: int = 1


class ConfigError(WaveTraceError, ValueError):
    """Configuración inválida o incompatible con las precondiciones."""

    exit_code = 2


class NumericalError(WaveTraceError):
    """Fallo numérico o precondición geométrica violada durante un cálculo."""

    exit_code = 3


class AcceptanceFailure(WaveTraceError):
    """Uno o más criterios de aceptación no se cumplen."""

    exit_code = 4


# === Billares ===
class TangentialHit(NumericalError):
    """El rayo toca la frontera tangencialmente (|η·ν| bajo tolerancia)."""


class InnerHit(NumericalError):
    """El rayo alcanza el obstáculo interior cuando no está permitido."""


class ReflectionAdjacent(NumericalError):
    """Tiempo demasiado cercano a una reflexión para evaluar el marco."""


# === Haces ===
class FocalPoint(NumericalError):
    """det(a+ib) se anula en el tiempo pedido."""


class NonClosedPath(NumericalError):
    """La trayectoria no cierra dentro de la tolerancia."""


class SingularFrame(NumericalError):
    """Z = a+ib singular al cierre."""


class SingularHessian(NumericalError):
    """Hessiano con autovalor nulo."""


class BranchDomainError(NumericalError):
    """Autovalor fuera del dominio de continuación de la raíz."""


class SingularGauge(NumericalError):
    """La trayectoria pasa por la singularidad del potencial."""


# === Espectros ===
class DomainError(NumericalError):
    """Argumentos fuera del rango validado de las funciones de Bessel."""


class ConvergenceFailure(NumericalError):
    """Un solver iterativo o de malla no convergió."""


class NotCurlFree(NumericalError):
    """El potencial periódico tiene campo magnético no nulo."""


# === Traza ===
class IncompleteSpectrum(NumericalError):
    """El espectro no cubre la frecuencia de corte de la ventana."""


class QuadratureFailure(NumericalError):
    """La cuadratura adaptativa no alcanzó la tolerancia."""


class IsolationViolation(NumericalError):
    """Otra longitud periódica invade la ventana de ajuste."""


class GenericityFailure(NumericalError):
    """La red no satisface |d'| = |d| => d' = ±d."""
