"""決定性と刺激（強いシミュレーション）の有界検査"""

from collections import deque
from typing import Any, Hashable, Optional

from ....shared.exceptions.errors import BudgetExceededError
from ....shared.logging.config import get_logger
from ...parsing.services.printer import format_label, format_process
from ...reports.domain.models import Outcome, Verdict
from ...syntax.domain.process import Process, Silent
from ..domain.models import DEFAULT_BUDGET, Exploration, ExplorationBudget
from .exploration import explore

logger = get_logger(__name__)


def determinism_key(label: Any, by_cause: bool = False) -> Hashable:
    """
    決定性の判定でラベルをまとめるキー

    by_causeがTrueならτを発生元のチャネルとメッセージで区別する（メッセージフローの決定性）。
    """
    if isinstance(label, Silent):
        if by_cause and label.cause is not None:
            return ("tau", label.cause.kind, label.cause.channel, label.cause.message)
        return ("tau",)
    return label


def find_nondeterminism(
    exploration: Exploration, by_cause: bool = False
) -> Optional[tuple[Any, list[Any]]]:
    """同じラベルで合同でない二つの状態に遷移するノードを探す（ノードと反例ラベル列）"""
    for node in exploration.graph.nodes:
        targets: dict[Hashable, set[Any]] = {}
        for label, target in exploration.successors(node):
            group = targets.setdefault(determinism_key(label, by_cause), set())
            group.add(target)
            if len(group) > 1:
                return node, exploration.trace_to(node) + [label]
    return None


def check_determinism(
    process: Process,
    budget: ExplorationBudget = DEFAULT_BUDGET,
    by_cause: bool = False,
    show_progress: bool = False,
    silent_only: bool = False,
) -> Verdict:
    """
    決定性の検査

    Args:
        process: 束縛名が付け替え済みのプロセス
        budget: 探索予算
        by_cause: τを発生元で区別するか
        silent_only: τ遷移だけを対象にするか（メッセージフローの決定性）
        show_progress: 進捗バーを表示するか

    Returns:
        Verdict: 反例があればfail、予算内で見つからず探索が打ち切られたらunknown
    """
    exploration = explore(process, budget, silent_only=silent_only, show_progress=show_progress)
    found = find_nondeterminism(exploration, by_cause)
    subject = format_process(process)
    common = {
        "check": "determinism",
        "subject": subject,
        "budget": budget.describe(),
        "states_explored": exploration.state_count,
    }
    if found is not None:
        node, trace = found
        return Verdict(
            outcome=Outcome.FAIL,
            message=f"State {format_process(exploration.term(node))} has two non-congruent "
            f"successors on {format_label(trace[-1])}",
            trace=[format_label(label) for label in trace],
            **common,
        )
    if exploration.truncated:
        return Verdict(
            outcome=Outcome.UNKNOWN, message="No counterexample within budget", **common
        )
    return Verdict(outcome=Outcome.PASS, message="Deterministic", **common)


def is_deterministic(
    process: Process, budget: ExplorationBudget = DEFAULT_BUDGET, by_cause: bool = False
) -> bool:
    """
    予算内で決定的かどうか

    Raises:
        BudgetExceededError: 反例が見つからないまま探索が打ち切られた場合
    """
    verdict = check_determinism(process, budget, by_cause)
    if verdict.outcome == Outcome.UNKNOWN:
        raise BudgetExceededError("Determinism unknown within budget", partial=verdict)
    return verdict.outcome == Outcome.PASS


# ---------------------------------------------------------------------------
# 刺激 P ≻ Q
# ---------------------------------------------------------------------------


def _labels_match(left: Any, right: Any) -> bool:
    if isinstance(left, Silent) or isinstance(right, Silent):
        return isinstance(left, Silent) and isinstance(right, Silent)
    return bool(left == right)


def check_stimulation(
    p: Process,
    q: Process,
    budget: ExplorationBudget = DEFAULT_BUDGET,
    show_progress: bool = False,
) -> Verdict:
    """
    P ≻ Q（Qの全ての遷移をPが同じラベルで模倣できる）の有界検査

    探索済みの状態グラフ上で最大不動点を計算する。展開されていない状態を含む組は
    楽観的に残すため、failは健全で、passは予算付きの判定になる。
    """
    left = explore(p, budget, show_progress=show_progress)
    right = explore(q, budget, show_progress=show_progress)
    common = {
        "check": "stimulation",
        "subject": f"{format_process(p)} > {format_process(q)}",
        "budget": budget.describe(),
        "states_explored": left.state_count + right.state_count,
    }

    root = (left.root, right.root)
    parents: dict[tuple, Optional[tuple[tuple, Any]]] = {root: None}
    queue: deque[tuple] = deque([root])
    while queue:
        s, t = queue.popleft()
        for label, t_next in right.successors(t):
            for p_label, s_next in left.successors(s):
                if _labels_match(p_label, label) and (s_next, t_next) not in parents:
                    parents[(s_next, t_next)] = ((s, t), label)
                    queue.append((s_next, t_next))

    relation = set(parents)
    uncertain = False
    failure: Optional[tuple[tuple, Any]] = None
    changed = True
    while changed:
        changed = False
        for pair in list(relation):
            s, t = pair
            if right.is_frontier(t) or left.is_frontier(s):
                uncertain = True
                continue
            for label, t_next in right.successors(t):
                if not any(
                    _labels_match(p_label, label) and (s_next, t_next) in relation
                    for p_label, s_next in left.successors(s)
                ):
                    relation.discard(pair)
                    if pair == root or failure is None:
                        failure = (pair, label)
                    changed = True
                    break

    if root not in relation:
        trace: list[str] = []
        pair = failure[0] if failure else root
        step = parents.get(pair)
        while step is not None:
            previous, label = step
            trace.append(format_label(label))
            step = parents.get(previous)
        trace.reverse()
        unmatched = format_label(failure[1]) if failure else "?"
        return Verdict(
            outcome=Outcome.FAIL,
            message=f"Move {unmatched} of the right-hand side is not matched",
            trace=trace + [unmatched],
            **common,
        )
    if uncertain or left.truncated or right.truncated:
        return Verdict(outcome=Outcome.UNKNOWN, message="Simulation holds within budget", **common)
    return Verdict(outcome=Outcome.PASS, message="Simulation holds", **common)


def stimulates(p: Process, q: Process, budget: ExplorationBudget = DEFAULT_BUDGET) -> bool:
    """
    P ≻ Q

    Raises:
        BudgetExceededError: 予算内で判定できない場合
    """
    verdict = check_stimulation(p, q, budget)
    if verdict.outcome == Outcome.UNKNOWN:
        raise BudgetExceededError("Stimulation unknown within budget", partial=verdict)
    return verdict.outcome == Outcome.PASS
