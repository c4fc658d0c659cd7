"""
Hierarquia de exceções do motor de lacunas
"""

from typing import Any, Dict, Optional


class GapEngineError(Exception):
    """Erro base do motor; carrega o código de saída usado pelo CLI"""

    exit_code: int = 1

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.context = context or {}


class CapacityError(GapEngineError):
    """Entrada acima do limite do crivo"""

    exit_code = 2


class ConfigurationError(GapEngineError):
    """Parâmetros de configuração inválidos"""

    exit_code = 2


class PolynomialParseError(ConfigurationError):
    """Token malformado em uma especificação de polinômio"""

    def __init__(self, token: str, position: int):
        super().__init__(
            f"Token inválido '{token}' na posição {position}",
            {"token": token, "position": position},
        )
        self.token = token
        self.position = position


class DomainError(GapEngineError):
    """Argumento fora do domínio da operação"""

    exit_code = 2


class UnsupportedParameterError(GapEngineError):
    """Combinação de parâmetros sem suporte (por exemplo η ≠ 1/2 em cotas de cauda)"""

    exit_code = 2


class PreconditionError(GapEngineError):
    """Pré-condição de uma verificação do laboratório não satisfeita"""

    exit_code = 2


class DegenerateMollifierError(GapEngineError):
    """Parte racional de D igual a zero"""


class InfeasibleMollifierError(GapEngineError):
    """Parte racional de D negativa"""


class CertificateUnavailableError(GapEngineError):
    """Truncamento J pequeno demais para o argumento de razão monótona"""


class CertificateVerificationError(GapEngineError):
    """Certificado não confere com a recomputação"""


class SearchExhaustedError(GapEngineError):
    """Todos os candidatos da busca foram inviáveis"""
