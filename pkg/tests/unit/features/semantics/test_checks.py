"""探索・決定性・刺激・対応の検査のテスト"""

import pytest

from src.features.reports.domain.models import Outcome
from src.features.semantics.domain.models import DEFAULT_BUDGET, ExplorationBudget
from src.features.semantics.services.checks import (
    check_determinism,
    check_stimulation,
    is_deterministic,
    stimulates,
)
from src.features.semantics.services.correspondence import (
    cause_translator,
    check_correspondence,
)
from src.features.semantics.services.exploration import (
    explore,
    explore_session,
    reachable,
    session_reachable,
)
from src.shared.exceptions.errors import BudgetExceededError, ConfigurationError
from tests.conftest import parse_process, parse_session


class TestExplorationBudget:
    """探索予算"""

    def test_defaults(self) -> None:
        """既定値"""
        assert DEFAULT_BUDGET.describe() == "4,32,20000"

    def test_parse(self) -> None:
        """'U,D,S' 形式を読む"""
        assert ExplorationBudget.parse("2, 10, 100") == ExplorationBudget(2, 10, 100)

    @pytest.mark.parametrize("text", ["1,2", "a,b,c", "1,2,3,4", "0,1,1"])
    def test_parse_rejects(self, text: str) -> None:
        """形式や値が不正なら設定エラー"""
        with pytest.raises(ConfigurationError):
            ExplorationBudget.parse(text)

    def test_presets(self) -> None:
        """YAMLのプリセット"""
        assert ExplorationBudget.from_preset("quick") == ExplorationBudget(2, 12, 2000)
        assert ExplorationBudget.from_preset("default") == DEFAULT_BUDGET

    def test_unknown_preset(self) -> None:
        """存在しないプリセット"""
        with pytest.raises(ConfigurationError):
            ExplorationBudget.from_preset("huge")


def test_explore_counts_states() -> None:
    """到達可能な状態を合同類ごとに数える"""
    exploration = explore(parse_process("a!v.0 | a?v.0"))
    assert exploration.state_count == 4
    assert not exploration.truncated
    assert len(reachable(parse_process("a!v.b!w.0"))) == 3


def test_explore_respects_state_budget() -> None:
    """状態数の上限で打ち切る"""
    exploration = explore(parse_process("a!v.b!w.c!u.0"), ExplorationBudget(4, 32, 2))
    assert exploration.state_count == 2
    assert exploration.truncated


def test_explore_silent_only() -> None:
    """τだけを辿る探索"""
    exploration = explore(parse_process("a!v.0 | a?v.0"), silent_only=True)
    assert exploration.state_count == 2


def test_session_reachable() -> None:
    """セッションの到達可能な状態"""
    assert len(session_reachable(parse_session("<1,2:m> -> <2,1:n> -> end"))) == 3
    # 両方の枝がendに至る
    union = explore_session(parse_session("<1,2:a> -> end (+) <1,2:b> -> end"))
    assert union.state_count == 2
    assert union.graph.number_of_edges() == 2


@pytest.mark.parametrize(
    "text,outcome",
    [
        ("a!v.b!w.0", Outcome.PASS),
        ("rec X.a!v.X", Outcome.PASS),
        ("a!v.0 + a!v.b!w.0", Outcome.FAIL),
        ("a!v.0 | a!v.b!w.0", Outcome.FAIL),
    ],
)
def test_check_determinism(text: str, outcome: Outcome) -> None:
    """同じラベルで合同でない二つの状態に進めば非決定的"""
    verdict = check_determinism(parse_process(text))
    assert verdict.outcome == outcome
    assert verdict.check == "determinism"
    if outcome == Outcome.FAIL:
        assert verdict.trace == ["a!v"]


def test_determinism_unknown_within_budget() -> None:
    """反例がないまま打ち切られればunknown"""
    process = parse_process("a!v.b!w.c!u.d!x.0")
    verdict = check_determinism(process, ExplorationBudget(4, 2, 100))
    assert verdict.outcome == Outcome.UNKNOWN
    with pytest.raises(BudgetExceededError):
        is_deterministic(process, ExplorationBudget(4, 2, 100))


def test_check_stimulation_pass() -> None:
    """大きい選択は小さい選択を模倣できる"""
    verdict = check_stimulation(parse_process("a!v.0 + b!w.0"), parse_process("a!v.0"))
    assert verdict.outcome == Outcome.PASS
    assert stimulates(parse_process("a!v.0 + b!w.0"), parse_process("a!v.0"))


def test_check_stimulation_fail() -> None:
    """模倣できない遷移を反例に示す"""
    verdict = check_stimulation(parse_process("a!v.0"), parse_process("a!v.0 + b!w.0"))
    assert verdict.outcome == Outcome.FAIL
    assert verdict.trace == ["b!w"]


def test_correspondence_follows_session() -> None:
    """成分間の通信がセッションの通信に対応する"""
    verdict = check_correspondence(
        parse_process("p:a!v.0 | q:a?v.0"),
        parse_session("<p,q:v> -> end"),
        cause_translator(),
        "flow",
    )
    assert verdict.outcome == Outcome.PASS
    assert verdict.check == "flow"


def test_correspondence_detects_wrong_direction() -> None:
    """向きの違う通信は対応しない"""
    verdict = check_correspondence(
        parse_process("p:a!v.0 | q:a?v.0"),
        parse_session("<q,p:v> -> end"),
        cause_translator(),
        "flow",
    )
    assert verdict.outcome == Outcome.FAIL
    assert verdict.trace == ["p,q:v"]


def test_correspondence_both_directions() -> None:
    """双方向ではセッションの遷移もプロセスが模倣する"""
    verdict = check_correspondence(
        parse_process("p:a!v.0 | q:a?v.0"),
        parse_session("<p,q:v> -> end (+) <p,q:w> -> end"),
        cause_translator(),
        "flow",
        both_directions=True,
    )
    assert verdict.outcome == Outcome.FAIL
