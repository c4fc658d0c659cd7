"""
Cache de valores exatos (integrais, momentos Q_u, coeficientes de série)
"""

import hashlib
from typing import Any, Callable, Optional

from cachetools import LRUCache

from app.config import settings
from app.utils.logger import log_cache_hit, log_cache_miss


class IntegralCache:
    """Memoização em memória de resultados exatos

    Os valores guardados são racionais ou polinômios exatos; o cache nunca altera
    um resultado, apenas evita recomputá-lo.
    """

    def __init__(self, maxsize: Optional[int] = None):
        self.memory_cache = LRUCache(maxsize=maxsize or settings.integral_cache_size)
        self.hits = 0
        self.misses = 0

    def generate_key(self, prefix: str, *args, **kwargs) -> str:
        """Gera chave única para cache"""
        key_parts = [prefix]
        key_parts.extend(str(arg) for arg in args)
        key_parts.extend(f"{key}:{value}" for key, value in sorted(kwargs.items()))
        key_string = "|".join(key_parts)
        return f"{prefix}:{hashlib.md5(key_string.encode()).hexdigest()}"

    def get(self, key: str) -> Optional[Any]:
        """Obtém valor do cache"""
        return self.memory_cache.get(key)

    def set(self, key: str, value: Any) -> None:
        """Define valor no cache"""
        self.memory_cache[key] = value

    def clear(self) -> None:
        """Limpa todo o cache"""
        self.memory_cache.clear()
        self.hits = 0
        self.misses = 0

    def get_or_set(self, key: str, default_func: Callable[[], Any]) -> Any:
        """Obtém valor do cache ou executa função padrão"""
        value = self.get(key)
        if value is not None:
            self.hits += 1
            if settings.debug:
                log_cache_hit(key)
            return value

        self.misses += 1
        if settings.debug:
            log_cache_miss(key)
        value = default_func()
        self.set(key, value)
        return value

    def get_stats(self) -> dict:
        """Retorna estatísticas do cache"""
        return {
            "memory_cache_size": len(self.memory_cache),
            "memory_cache_maxsize": self.memory_cache.maxsize,
            "hits": self.hits,
            "misses": self.misses,
        }


# Instância global do cache
integral_cache = IntegralCache()
