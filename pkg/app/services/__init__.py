"""
Serviços do motor
"""

from .cache_service import IntegralCache, integral_cache

__all__ = ["IntegralCache", "integral_cache"]
