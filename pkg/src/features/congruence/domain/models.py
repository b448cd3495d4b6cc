"""構造合同の判定に使う正規形"""

from dataclasses import dataclass
from typing import Generic, TypeVar

T = TypeVar("T")


@dataclass(frozen=True)
class CanonicalForm(Generic[T]):
    """
    正規形

    fingerprintが等しいことと、元の項が構造合同であることが対応する。
    """

    term: T  # 正規化した項（元の名前のまま、子は指紋順）
    fingerprint: str  # 束縛名を正準名に置き換えた文字列
