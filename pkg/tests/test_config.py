"""
Testes das configurações
"""

import pytest

from app.config import Settings
from app.exceptions import ConfigurationError


class TestSettings:
    """Validação das variáveis de ambiente"""

    def test_defaults(self):
        config = Settings(_env_file=None)
        assert config.default_r == 2
        assert config.euler_method in ("accelerated", "partial")
        assert config.eta.denominator == 2

    def test_precision_too_low(self):
        with pytest.raises(ConfigurationError) as exc_info:
            Settings(_env_file=None, GAP_PRECISION=32)
        assert exc_info.value.exit_code == 2
        assert exc_info.value.context == {"precision_bits": 32}

    def test_unknown_euler_method(self, monkeypatch):
        monkeypatch.setenv("EULER_METHOD", "naive")
        with pytest.raises(ConfigurationError) as exc_info:
            Settings(_env_file=None)
        assert "EULER_METHOD" in exc_info.value.message
