"""
Linhas de comparação do laboratório de lemas
"""

from typing import Dict, Optional

import mpmath
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .numeric import MpComplex, mp_to_str

CSV_HEADER = ("x", "lhs_re", "lhs_im", "main_re", "main_im", "ratio_re", "ratio_im", "deviation")


class ComparisonRow(BaseModel):
    """Soma calculada contra o termo principal assintótico em um corte x"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    x: int = Field(ge=1, description="Corte da soma")
    lhs: MpComplex = Field(description="Soma calculada")
    main_term: MpComplex = Field(description="Termo principal")
    ratio: Optional[MpComplex] = Field(default=None, description="lhs/main_term")
    deviation: Optional[MpComplex] = Field(default=None, description="lhs − main_term")
    label: str = Field(default="", description="Identificação da verificação")

    @model_validator(mode="after")
    def _fill_derived(self) -> "ComparisonRow":
        if self.deviation is None:
            self.deviation = self.lhs - self.main_term
        if self.ratio is None and self.main_term != 0:
            self.ratio = self.lhs / self.main_term
        return self

    @property
    def is_real(self) -> bool:
        return self.lhs.imag == 0 and self.main_term.imag == 0

    def csv_fields(self) -> Dict[str, str]:
        """Campos do CSV; deviation é o desvio com sinal em linhas reais e o módulo em linhas complexas"""
        ratio = self.ratio if self.ratio is not None else mpmath.mpc(mpmath.nan, 0)
        deviation = self.deviation.real if self.is_real else abs(self.deviation)
        values = (
            self.x,
            self.lhs.real,
            self.lhs.imag,
            self.main_term.real,
            self.main_term.imag,
            ratio.real,
            ratio.imag,
            deviation,
        )
        return {name: str(v) if isinstance(v, int) else _short(v) for name, v in zip(CSV_HEADER, values)}


def _short(value) -> str:
    if mpmath.isnan(value):
        return "nan"
    return mp_to_str(mpmath.mpf(value))
