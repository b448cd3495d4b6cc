"""
プロセスのτ遷移とセッションの遷移の対応検査

システムの内部遷移（通信・セッション確立）を発生元からセッションのラベルに翻訳し、
(プロセス状態, セッション状態) の組を幅優先で探索する。探索後に最大不動点を取り、
根の組が残れば対応が成り立つ。
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Optional

from tqdm import tqdm

from ....shared.logging.config import get_logger
from ...congruence.services.congruence import (
    fingerprint,
    normalize,
    normalize_session,
    session_fingerprint,
)
from ...parsing.services.printer import format_label, format_process, format_session
from ...reports.domain.models import Outcome, Verdict
from ...syntax.domain.process import InteractionCause, Process, Silent
from ...syntax.domain.session import Session
from ...syntax.domain.system import TypeEnvironment
from ..domain.models import (
    DEFAULT_BUDGET,
    CommLabel,
    EstablishLabel,
    ExplorationBudget,
    SessionLabel,
)
from .transitions import proc_transitions, session_transitions

logger = get_logger(__name__)

Translate = Callable[[Optional[InteractionCause]], Optional[SessionLabel]]
SessionSuccessors = Callable[[Session], tuple[list[tuple[SessionLabel, Session]], bool]]
PairKey = tuple[Hashable, Hashable]


@dataclass
class _Pair:
    """探索中の組"""

    process: Process
    session: Session
    depth: int
    expanded: bool = False
    # (ラベル, 一致した後続の組) の一覧。後続が空なら直ちに不一致
    obligations: list[tuple[str, list[PairKey]]] = field(default_factory=list)


def default_session_successors(
    budget: ExplorationBudget,
) -> SessionSuccessors:
    """セッションの遷移関係（正規化済みの後続）"""

    def successors(session: Session) -> tuple[list[tuple[SessionLabel, Session]], bool]:
        result = session_transitions(session, budget)
        return (
            [(label, normalize_session(target)) for label, target in result.transitions],
            result.truncated,
        )

    return successors


def check_correspondence(
    process: Process,
    session: Session,
    translate: Translate,
    check: str,
    budget: ExplorationBudget = DEFAULT_BUDGET,
    both_directions: bool = False,
    session_successors: Optional[SessionSuccessors] = None,
    show_progress: bool = False,
) -> Verdict:
    """
    プロセスのτ遷移がセッションの遷移で模倣されるかを有界に検査する

    Args:
        process: 束縛名が付け替え済みのプロセス（ラベル付きの成分の並行合成）
        session: セッション
        translate: τの発生元をセッションのラベルに翻訳する関数（翻訳できなければNone）
        check: Verdictに記録する検査名
        budget: 探索予算
        both_directions: セッションの遷移もプロセスで模倣されることを要求するか
        session_successors: セッションの遷移関係（省略時は通常の意味論）
        show_progress: 進捗バーを表示するか

    Returns:
        Verdict: 根の組が最大不動点に残らなければ最短の反例付きでfail
    """
    successors = session_successors or default_session_successors(budget)
    subject = f"{format_process(process)} ~ {format_session(session)}"
    root_process = normalize(process)
    root_session = normalize_session(session)
    root: PairKey = (fingerprint(root_process), session_fingerprint(root_session))
    pairs: dict[PairKey, _Pair] = {root: _Pair(root_process, root_session, 0)}
    parents: dict[PairKey, Optional[tuple[PairKey, str]]] = {root: None}
    queue: deque[PairKey] = deque([root])
    truncated = False

    progress = tqdm(desc=f"Checking {check}", unit="pairs", disable=not show_progress)
    try:
        while queue:
            key = queue.popleft()
            pair = pairs[key]
            if pair.depth >= budget.max_depth:
                truncated = True
                continue
            process_result = proc_transitions(pair.process, budget)
            session_moves, session_partial = successors(pair.session)
            truncated = truncated or process_result.truncated or session_partial
            pair.expanded = True
            progress.update(1)

            process_moves: list[tuple[Optional[SessionLabel], str, Process]] = []
            for action, target in process_result.transitions:
                if isinstance(action, Silent):
                    label = translate(action.cause)
                    text = str(label) if label is not None else format_label(action)
                    process_moves.append((label, text, normalize(target)))

            def child(process_target: Process, session_target: Session, text: str) -> PairKey:
                nonlocal truncated
                target_key = (fingerprint(process_target), session_fingerprint(session_target))
                if target_key not in pairs:
                    if len(pairs) >= budget.max_states:
                        truncated = True
                        return target_key
                    pairs[target_key] = _Pair(process_target, session_target, pair.depth + 1)
                    parents[target_key] = (key, text)
                    queue.append(target_key)
                return target_key

            for label, text, process_target in process_moves:
                matched = [
                    child(process_target, session_target, text)
                    for session_label, session_target in session_moves
                    if label is not None and session_label == label
                ]
                pair.obligations.append((text, matched))
            if both_directions:
                for session_label, session_target in session_moves:
                    text = str(session_label)
                    matched = [
                        child(process_target, session_target, text)
                        for label, _, process_target in process_moves
                        if label == session_label
                    ]
                    pair.obligations.append((text, matched))
    finally:
        progress.close()

    relation = set(pairs)
    changed = True
    while changed:
        changed = False
        for key in list(relation):
            pair = pairs[key]
            if not pair.expanded:
                continue
            for _, matched in pair.obligations:
                # 予算で登録されなかった後続は楽観的に残す
                if not any(m in relation or m not in pairs for m in matched):
                    relation.discard(key)
                    changed = True
                    break

    common = {
        "check": check,
        "subject": subject,
        "budget": budget.describe(),
        "states_explored": len(pairs),
    }
    if root not in relation:
        failing = min(
            (
                (pairs[key].depth, key, text)
                for key in pairs
                for text, matched in pairs[key].obligations
                if not matched
            ),
            key=lambda item: item[0],
            default=None,
        )
        trace: list[str] = []
        message = "Correspondence fails"
        if failing is not None:
            _, key, text = failing
            step = parents.get(key)
            while step is not None:
                previous, step_text = step
                trace.append(step_text)
                step = parents.get(previous)
            trace.reverse()
            trace.append(text)
            message = f"Move {text} is not matched"
        logger.info(f"{check} failed: {message}")
        return Verdict(outcome=Outcome.FAIL, message=message, trace=trace, **common)
    if truncated:
        return Verdict(outcome=Outcome.UNKNOWN, message="No mismatch within budget", **common)
    return Verdict(outcome=Outcome.PASS, message="Every move is matched", **common)


def cause_translator(env: Optional[TypeEnvironment] = None) -> Translate:
    """
    τの発生元をセッションのラベルに翻訳する関数を作る

    通信は関与した成分のラベルから p,q:v に、確立は招待者と受諾者のラベル列と
    Γでチャネルに束縛されたセッション名から p̃:B になる。
    """

    def translate(cause: Optional[InteractionCause]) -> Optional[SessionLabel]:
        if cause is None or any(party is None for party in cause.parties):
            return None
        parties = tuple(str(party) for party in cause.parties)
        if cause.kind == "com" and cause.message is not None:
            return CommLabel(parties[0], parties[1], cause.message)
        if cause.kind == "sess" and env is not None and cause.channel is not None:
            binding = env.lookup(cause.channel)
            if binding is not None:
                return EstablishLabel(parties, binding.session)
        return None

    return translate
