"""
Testes do cache de valores exatos
"""

from fractions import Fraction

from app.services.cache_service import IntegralCache


class TestIntegralCache:
    """Testes de memoização e estatísticas"""

    def test_get_or_set_counts_hits(self):
        cache = IntegralCache(maxsize=8)
        calls = []

        def compute():
            calls.append(1)
            return Fraction(1, 3)

        key = cache.generate_key("Q", 2, (1, 0, 5))
        assert cache.get_or_set(key, compute) == Fraction(1, 3)
        assert cache.get_or_set(key, compute) == Fraction(1, 3)
        assert len(calls) == 1
        stats = cache.get_stats()
        assert (stats["hits"], stats["misses"], stats["memory_cache_size"]) == (1, 1, 1)
        assert stats["memory_cache_maxsize"] == 8

    def test_keys_are_stable(self):
        cache = IntegralCache(maxsize=8)
        first = cache.generate_key("i_P", 1, 2, order=3)
        assert first == cache.generate_key("i_P", 1, 2, order=3)
        assert first != cache.generate_key("k_P", 1, 2, order=3)
        assert first.startswith("i_P:")

    def test_clear_resets_values_and_stats(self):
        cache = IntegralCache(maxsize=8)
        cache.get_or_set("a", lambda: Fraction(2))
        cache.get_or_set("a", lambda: Fraction(2))
        cache.clear()
        assert cache.get("a") is None
        assert cache.get_stats() == {"memory_cache_size": 0, "memory_cache_maxsize": 8, "hits": 0, "misses": 0}

    def test_lru_eviction(self):
        cache = IntegralCache(maxsize=2)
        for key in ("a", "b", "c"):
            cache.set(key, Fraction(1))
        assert cache.get("a") is None
        assert cache.get_stats()["memory_cache_size"] == 2
