"""
Modelos Pydantic para o núcleo aritmético
"""

from typing import List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .numeric import MpReal


class FactoredInteger(BaseModel):
    """Inteiro positivo com sua fatoração m = ∏ p^λ"""

    model_config = ConfigDict(frozen=True)

    value: int = Field(ge=1, description="Inteiro positivo")
    factors: List[Tuple[int, int]] = Field(
        default_factory=list, description="Pares (primo, expoente) em ordem crescente de primo"
    )

    @model_validator(mode="after")
    def _check_factorization(self) -> "FactoredInteger":
        product = 1
        previous = 1
        for prime, exponent in self.factors:
            if prime <= previous:
                raise ValueError("primos devem ser estritamente crescentes")
            if exponent < 1:
                raise ValueError("expoentes devem ser ≥ 1")
            product *= prime**exponent
            previous = prime
        if product != self.value:
            raise ValueError(f"fatores não reproduzem {self.value}")
        return self

    @property
    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


class EulerProductValue(BaseModel):
    """Produto de Euler truncado com cota rigorosa da cauda"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    r: int = Field(ge=1, description="Índice r da constante a_r")
    cutoff: int = Field(ge=2, description="Maior primo tratado explicitamente")
    method: Literal["partial", "accelerated"] = Field(description="Tratamento da cauda")
    precision: int = Field(ge=64, description="Precisão de trabalho em bits")
    value: MpReal = Field(description="Valor do produto")
    tail_bound: MpReal = Field(description="Cota para |valor verdadeiro − valor|")

    @model_validator(mode="after")
    def _check_signs(self) -> "EulerProductValue":
        if self.tail_bound < 0:
            raise ValueError("tail_bound deve ser ≥ 0")
        if self.value <= 0:
            raise ValueError("valor do produto deve ser positivo")
        return self
