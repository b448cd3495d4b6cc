"""キャッシュ付き正規化"""

from threading import Lock
from typing import Any, Callable, Generic, TypeVar

from ....shared.logging.config import get_logger
from ..domain.models import CanonicalForm

logger = get_logger(__name__)

T = TypeVar("T")


class FingerprintCache(Generic[T]):
    """
    キャッシュ付き正規化

    探索中に同じ項を何度も正規化するため、
    項をキーとしたメモリ内キャッシュを使用
    """

    def __init__(
        self, canonicalizer: Callable[[T], CanonicalForm[T]], max_size: int = 200000
    ) -> None:
        """
        Args:
            canonicalizer: ベースとなる正規化関数
            max_size: キャッシュの最大エントリ数（超えたら全消去）
        """
        self.canonicalizer = canonicalizer
        self.max_size = max_size
        self.cache: dict[Any, CanonicalForm[T]] = {}
        self.hit_count = 0
        self.miss_count = 0
        self._lock = Lock()

    def canonical(self, term: T) -> CanonicalForm[T]:
        """
        正規形を取得（キャッシュあり）

        Args:
            term: プロセスまたはセッション

        Returns:
            CanonicalForm[T]: 正規形
        """
        cached = self.cache.get(term)
        if cached is not None:
            self.hit_count += 1
            return cached

        self.miss_count += 1
        form = self.canonicalizer(term)

        with self._lock:
            if len(self.cache) >= self.max_size:
                logger.debug(f"Fingerprint cache full ({len(self.cache)} entries), clearing")
                self.cache.clear()
            self.cache[term] = form
        return form

    def fingerprint(self, term: T) -> str:
        return self.canonical(term).fingerprint

    def clear_cache(self) -> None:
        """キャッシュをクリア"""
        cache_size = len(self.cache)
        with self._lock:
            self.cache.clear()
            self.hit_count = 0
            self.miss_count = 0
        logger.info(f"Cache cleared: {cache_size} entries removed")

    def get_cache_stats(self) -> dict[str, float]:
        """
        キャッシュ統計を取得

        Returns:
            dict[str, float]: キャッシュ統計（サイズ、ヒット数、ミス数、ヒット率）
        """
        total_requests = self.hit_count + self.miss_count
        hit_rate = (self.hit_count / total_requests * 100) if total_requests > 0 else 0.0

        return {
            "cache_size": len(self.cache),
            "hit_count": self.hit_count,
            "miss_count": self.miss_count,
            "total_requests": total_requests,
            "hit_rate_percent": round(hit_rate, 2),
        }
