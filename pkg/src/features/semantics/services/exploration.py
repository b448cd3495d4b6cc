"""有界な状態空間探索（networkx）"""

from collections import deque
from typing import Any, Callable, Hashable

import networkx as nx
from tqdm import tqdm

from ....shared.logging.config import get_logger
from ...congruence.services.congruence import (
    fingerprint,
    normalize,
    normalize_session,
    session_fingerprint,
)
from ...syntax.domain.process import Process, Silent
from ...syntax.domain.session import Session
from ..domain.models import DEFAULT_BUDGET, Exploration, ExplorationBudget
from .transitions import proc_transitions, session_transitions

logger = get_logger(__name__)

Successors = Callable[[Any], tuple[list[tuple[Any, Any]], bool]]


def explore_graph(
    root: Any,
    successors: Successors,
    key: Callable[[Any], Hashable],
    budget: ExplorationBudget = DEFAULT_BUDGET,
    show_progress: bool = False,
    description: str = "Exploring",
) -> Exploration:
    """
    幅優先で状態グラフを構築する

    Args:
        root: 初期状態
        successors: 状態から (ラベル, 後続状態) の一覧と打ち切りの有無を返す関数
        key: 状態の同一視に使うキー
        budget: 探索予算（深さ・状態数）
        show_progress: 進捗バーを表示するか
        description: 進捗バーの説明

    Returns:
        Exploration: 状態グラフ
    """
    graph = nx.MultiDiGraph()
    root_key = key(root)
    graph.add_node(root_key, term=root, depth=0, expanded=False)
    queue: deque[Hashable] = deque([root_key])
    truncated = False
    depth_reached = 0

    progress = tqdm(desc=description, unit="states", disable=not show_progress)
    try:
        while queue:
            node = queue.popleft()
            attributes = graph.nodes[node]
            depth = attributes["depth"]
            depth_reached = max(depth_reached, depth)
            transitions, partial = successors(attributes["term"])
            if depth >= budget.max_depth:
                # 深さの上限: 後続がなければ展開済みとして扱う
                if transitions or partial:
                    truncated = True
                else:
                    attributes["expanded"] = True
                continue

            attributes["expanded"] = True
            if partial:
                attributes["partial"] = True
                truncated = True
            progress.update(1)

            for label, target in transitions:
                target_key = key(target)
                if target_key not in graph:
                    if graph.number_of_nodes() >= budget.max_states:
                        attributes["partial"] = True
                        truncated = True
                        continue
                    graph.add_node(target_key, term=target, depth=depth + 1, expanded=False)
                    queue.append(target_key)
                graph.add_edge(node, target_key, label=label)
    finally:
        progress.close()

    if truncated:
        logger.info(
            f"Exploration truncated at {graph.number_of_nodes()} states "
            f"(budget {budget.describe()})"
        )
    return Exploration(
        root=root_key, graph=graph, truncated=truncated, depth_reached=depth_reached
    )


def explore(
    process: Process,
    budget: ExplorationBudget = DEFAULT_BUDGET,
    silent_only: bool = False,
    show_progress: bool = False,
) -> Exploration:
    """
    プロセスの到達可能な状態を有界に探索する

    Args:
        process: 束縛名が付け替え済みのプロセス
        budget: 探索予算
        silent_only: τ遷移だけを辿るか（システムの実行）
        show_progress: 進捗バーを表示するか

    Returns:
        Exploration: ノードは正規形の指紋、ノード属性termは正規化した項
    """

    def successors(term: Process) -> tuple[list[tuple[Any, Any]], bool]:
        result = proc_transitions(term, budget)
        transitions = [
            (label, normalize(target))
            for label, target in result.transitions
            if not silent_only or isinstance(label, Silent)
        ]
        return transitions, result.truncated

    return explore_graph(
        normalize(process), successors, fingerprint, budget, show_progress, "Exploring process"
    )


def reachable(process: Process, budget: ExplorationBudget = DEFAULT_BUDGET) -> list[Process]:
    """proc(P): 予算内で到達可能な状態（探索順）"""
    exploration = explore(process, budget)
    return [exploration.term(node) for node in exploration.graph.nodes]


def explore_session(
    session: Session, budget: ExplorationBudget = DEFAULT_BUDGET, show_progress: bool = False
) -> Exploration:
    """セッションの到達可能な状態を有界に探索する"""

    def successors(term: Session) -> tuple[list[tuple[Any, Any]], bool]:
        result = session_transitions(term, budget)
        return [(label, normalize_session(t)) for label, t in result.transitions], result.truncated

    return explore_graph(
        normalize_session(session),
        successors,
        session_fingerprint,
        budget,
        show_progress,
        "Exploring session",
    )


def session_reachable(
    session: Session, budget: ExplorationBudget = DEFAULT_BUDGET
) -> list[Session]:
    """予算内で到達可能なセッションの状態"""
    exploration = explore_session(session, budget)
    return [exploration.term(node) for node in exploration.graph.nodes]
