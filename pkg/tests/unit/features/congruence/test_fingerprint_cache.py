"""キャッシュ付き正規化のテスト"""

from src.features.congruence.providers.fingerprint_cache import FingerprintCache
from src.features.congruence.services.normal_form import canonicalize
from tests.conftest import parse_process


def test_hits_and_misses() -> None:
    cache = FingerprintCache(canonicalize)
    process = parse_process("a!v.0 | b?w.0")

    first = cache.fingerprint(process)
    second = cache.fingerprint(process)

    assert first == second
    stats = cache.get_cache_stats()
    assert stats["cache_size"] == 1
    assert stats["hit_count"] == 1
    assert stats["miss_count"] == 1
    assert stats["hit_rate_percent"] == 50.0


def test_congruent_terms_share_fingerprint() -> None:
    cache = FingerprintCache(canonicalize)
    assert cache.fingerprint(parse_process("a!v.0 | b?w.0")) == cache.fingerprint(
        parse_process("b?w.0 | a!v.0")
    )
    assert cache.get_cache_stats()["cache_size"] == 2


def test_full_cache_is_cleared() -> None:
    cache = FingerprintCache(canonicalize, max_size=1)
    cache.canonical(parse_process("a!v.0"))
    cache.canonical(parse_process("b!v.0"))
    assert cache.get_cache_stats()["cache_size"] == 1


def test_clear_cache() -> None:
    cache = FingerprintCache(canonicalize)
    cache.canonical(parse_process("a!v.0"))
    cache.clear_cache()
    assert cache.get_cache_stats() == {
        "cache_size": 0,
        "hit_count": 0,
        "miss_count": 0,
        "total_requests": 0,
        "hit_rate_percent": 0.0,
    }
