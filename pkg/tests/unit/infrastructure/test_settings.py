"""設定のテスト"""

import pytest
from pydantic import ValidationError

from src.features.semantics.domain.models import ExplorationBudget
from src.infrastructure.config.settings import Settings
from src.shared.exceptions.errors import ConfigurationError


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """実行環境のSESSTOOL_*変数を取り除く"""
    for name in (
        "SESSTOOL_BUDGET",
        "SESSTOOL_BUDGET_PRESET",
        "SESSTOOL_MAX_REC_UNFOLD",
        "SESSTOOL_MAX_DEPTH",
        "SESSTOOL_MAX_STATES",
        "SESSTOOL_OUTPUT_FORMAT",
        "SESSTOOL_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)


def test_defaults() -> None:
    settings = Settings(_env_file=None)

    assert settings.output_format == "text"
    assert settings.log_level == "WARNING"
    assert settings.typing_candidate_limit == 64
    assert not settings.is_json
    assert settings.exploration_budget() == ExplorationBudget(4, 32, 20000)


class TestExplorationBudget:
    """予算の優先順位: 引数 > SESSTOOL_BUDGET > プリセット > 個別設定"""

    def test_fields(self) -> None:
        settings = Settings(_env_file=None, max_rec_unfold=1, max_depth=5, max_states=50)
        assert settings.exploration_budget() == ExplorationBudget(1, 5, 50)

    def test_preset_over_fields(self) -> None:
        settings = Settings(_env_file=None, max_depth=5, budget_preset="quick")
        assert settings.exploration_budget() == ExplorationBudget(2, 12, 2000)

    def test_budget_over_preset(self) -> None:
        settings = Settings(_env_file=None, budget="3,10,100", budget_preset="deep")
        assert settings.exploration_budget() == ExplorationBudget(3, 10, 100)

    def test_override_wins(self) -> None:
        settings = Settings(_env_file=None, budget="3,10,100")
        assert settings.exploration_budget("1,2,3") == ExplorationBudget(1, 2, 3)

    def test_invalid(self) -> None:
        settings = Settings(_env_file=None, budget="3,10")
        with pytest.raises(ConfigurationError):
            settings.exploration_budget()


class TestEnvironment:
    """環境変数からの読み込み"""

    def test_prefix(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("SESSTOOL_BUDGET", "2,8,500")
        monkeypatch.setenv("SESSTOOL_OUTPUT_FORMAT", "JSON")

        settings = Settings(_env_file=None)

        assert settings.exploration_budget() == ExplorationBudget(2, 8, 500)
        assert settings.output_format == "json"
        assert settings.is_json

    def test_unprefixed_ignored(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("MAX_DEPTH", "3")
        assert Settings(_env_file=None).max_depth == 32

    def test_env_file(self, tmp_path, monkeypatch: pytest.MonkeyPatch) -> None:
        env_file = tmp_path / ".env"
        env_file.write_text("SESSTOOL_BUDGET_PRESET=deep\n", encoding="utf-8")

        settings = Settings(_env_file=str(env_file))

        assert settings.exploration_budget() == ExplorationBudget(6, 64, 100000)


@pytest.mark.parametrize("value", ["xml", "", "yaml"])
def test_invalid_output_format(value: str) -> None:
    with pytest.raises(ValidationError):
        Settings(_env_file=None, output_format=value)


@pytest.mark.parametrize("value", [0, -1])
def test_positive_limits(value: int) -> None:
    with pytest.raises(ValidationError):
        Settings(_env_file=None, max_states=value)
