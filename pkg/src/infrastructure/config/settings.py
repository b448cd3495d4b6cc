"""アプリケーション設定（Pydantic Settings）"""

from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ...features.semantics.domain.models import ExplorationBudget


class Settings(BaseSettings):
    """アプリケーション設定"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="SESSTOOL_",
        case_sensitive=False,
        extra="ignore",
    )

    # Project
    project_name: str = Field(
        default="sesstool",
        description="プロジェクト名",
    )

    # Exploration budget
    max_rec_unfold: int = Field(
        default=4,
        gt=0,
        description="一つの導出で許す再帰展開の回数",
    )
    max_depth: int = Field(
        default=32,
        gt=0,
        description="探索の最大深さ",
    )
    max_states: int = Field(
        default=20000,
        gt=0,
        description="探索する状態数の上限",
    )
    budget: Optional[str] = Field(
        default=None,
        description="探索予算 'unfold,depth,states'（SESSTOOL_BUDGET、個別設定より優先）",
    )
    budget_preset: Optional[str] = Field(
        default=None,
        description="探索予算のプリセット名（default, quick, deep）",
    )

    # Typing
    typing_candidate_limit: int = Field(
        default=64,
        gt=0,
        description="型推論で保持する候補数の上限",
    )

    # Output
    output_format: str = Field(
        default="text",
        description="レポートの出力形式 (text, json)",
    )
    show_progress: bool = Field(
        default=False,
        description="探索の進捗バーを表示するか",
    )

    # Logging
    log_level: str = Field(
        default="WARNING",
        description="ログレベル (DEBUG, INFO, WARNING, ERROR, CRITICAL)",
    )

    @field_validator("output_format")
    @classmethod
    def validate_output_format(cls, value: str) -> str:
        if value.lower() not in ("text", "json"):
            raise ValueError(f"Unsupported output format: {value}")
        return value.lower()

    def exploration_budget(self, override: Optional[str] = None) -> ExplorationBudget:
        """
        有効な探索予算を取得

        優先順位: 引数（CLIフラグ） > SESSTOOL_BUDGET > プリセット > 個別設定

        Args:
            override: "unfold,depth,states" 形式の予算

        Returns:
            ExplorationBudget: 探索予算
        """
        if override:
            return ExplorationBudget.parse(override)
        if self.budget:
            return ExplorationBudget.parse(self.budget)
        if self.budget_preset:
            return ExplorationBudget.from_preset(self.budget_preset)
        return ExplorationBudget(self.max_rec_unfold, self.max_depth, self.max_states)

    @property
    def is_json(self) -> bool:
        """JSON出力かどうか"""
        return self.output_format == "json"
