"""
Modelos de certificados e do relatório de verificação
"""

from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field


class GapCertificate(BaseModel):
    """Registro verificável de uma cota λ ≥ κ*

    Todos os números são strings. Racionais saem como "p/q" e os reais mpmath como
    seu valor diádico exato "m/2^k", de modo que o JSON volta idêntico bit a bit.
    """

    model_config = ConfigDict(frozen=True)

    r: int = Field(ge=1)
    eta: str = Field(description="η como racional")
    poly: List[str] = Field(description="Coeficientes de P, constante primeiro")
    J: int = Field(ge=1)
    precision_bits: int = Field(ge=64)
    kappa_star: str = Field(description="κ* = c*/π")
    partial_sum: str = Field(description="Σ_{j≤J} em κ*")
    tail_bound: str = Field(description="Cota da cauda Σ_{j>J}")
    margin: str = Field(description="1 − (soma parcial + cauda)")
    d_rational: str = Field(description="D/π exato")
    coefficients: List[str] = Field(description="A_j exatos, j = 1..J")


class VerificationRow(BaseModel):
    """Linha da tabela de aprovação do verify-paper"""

    check: str
    expected: str
    observed: str
    status: Literal["pass", "fail"]


class VerificationReport(BaseModel):
    rows: List[VerificationRow] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(row.status == "pass" for row in self.rows)

    def add(self, check: str, expected: str, observed: str, ok: bool) -> None:
        self.rows.append(
            VerificationRow(check=check, expected=expected, observed=observed, status="pass" if ok else "fail")
        )

    def as_table(self) -> str:
        width = max((len(row.check) for row in self.rows), default=10)
        lines = [f"{'verificação'.ljust(width)} | status | esperado | observado"]
        for row in self.rows:
            lines.append(f"{row.check.ljust(width)} | {row.status.ljust(6)} | {row.expected} | {row.observed}")
        return "\n".join(lines)
