"""検査結果のレポートモデル"""

from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, Field


class Outcome(str, Enum):
    """検査の結果"""

    PASS = "pass"  # 合格
    FAIL = "fail"  # 不合格
    UNKNOWN = "unknown"  # 予算内で判定できず

    @property
    def exit_code(self) -> int:
        """CLIの終了コード"""
        return {Outcome.PASS: 0, Outcome.FAIL: 1, Outcome.UNKNOWN: 2}[self]

    @classmethod
    def combine(cls, outcomes: list["Outcome"]) -> "Outcome":
        """複数の結果をまとめる（不合格 > 不明 > 合格）"""
        if any(o == cls.FAIL for o in outcomes):
            return cls.FAIL
        if any(o == cls.UNKNOWN for o in outcomes):
            return cls.UNKNOWN
        return cls.PASS


class Diagnostic(BaseModel):
    """個々の違反・所見"""

    code: str = Field(description="違反の種類（例: wellformed.1, RoleDisagreement）")
    message: str = Field(description="説明")
    subject: Optional[str] = Field(default=None, description="対象（セッション名・参加者名など）")
    path: Optional[str] = Field(default=None, description="部分項の位置")
    expected: Optional[str] = Field(default=None, description="期待した項")
    found: Optional[str] = Field(default=None, description="実際の項")


class Report(BaseModel):
    """検査レポート"""

    check: str = Field(description="検査名")
    subject: str = Field(description="検査対象")
    outcome: Outcome
    diagnostics: list[Diagnostic] = Field(default_factory=list)
    details: dict[str, Any] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.outcome == Outcome.PASS


class Verdict(BaseModel):
    """有界探索による判定"""

    check: str = Field(description="検査名")
    subject: str = Field(description="検査対象")
    outcome: Outcome
    message: str = Field(default="", description="判定の説明")
    trace: list[str] = Field(default_factory=list, description="根からの反例トレース")
    budget: str = Field(default="", description="使用した探索予算 'unfold,depth,states'")
    states_explored: int = Field(default=0, description="探索した状態数")

    @property
    def passed(self) -> bool:
        return self.outcome == Outcome.PASS


class SliceEntry(BaseModel):
    """一つのスライスと期待するロールの比較"""

    session: str = Field(description="セッション名（主スライスは統合セッション名）")
    channel: Optional[str] = Field(default=None, description="セッションチャネル")
    channels: list[str] = Field(default_factory=list, description="通信チャネル組")
    index: Optional[int] = Field(default=None, description="参加者番号（主スライスはNone）")
    slice: str = Field(description="スライス")
    expected: str = Field(description="期待するロール")
    outcome: Outcome
    mismatch: Optional[str] = Field(default=None, description="最初の不一致の説明")


class SliceReport(BaseModel):
    """スライスによる違反セッションの診断"""

    process: str
    spec: str
    role: str
    outcome: Outcome
    entries: list[SliceEntry] = Field(default_factory=list)
    caveat: Optional[str] = Field(
        default=None, description="スライスの一致は型付け可能性を意味しない旨の注記"
    )

    @property
    def passed(self) -> bool:
        return self.outcome == Outcome.PASS
