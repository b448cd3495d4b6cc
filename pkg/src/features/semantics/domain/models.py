"""意味論のドメインモデル"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

import networkx as nx
import yaml

from ....shared.exceptions.errors import ConfigurationError
from ...syntax.domain.process import Action, Process
from ...syntax.domain.session import Session

BUDGET_PRESETS_PATH = Path(__file__).resolve().parent.parent / "config" / "budgets.yaml"


@dataclass(frozen=True)
class ExplorationBudget:
    """探索予算"""

    max_rec_unfold: int = 4  # 一つの導出で許す[Rec]の適用回数
    max_depth: int = 32  # 探索の最大深さ
    max_states: int = 20000  # 探索する状態数の上限

    def __post_init__(self) -> None:
        for name in ("max_rec_unfold", "max_depth", "max_states"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"Budget field {name} must be positive")

    @classmethod
    def parse(cls, text: str) -> "ExplorationBudget":
        """
        "U,D,S" 形式の文字列から予算を作る

        Raises:
            ConfigurationError: 形式が不正な場合
        """
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != 3:
            raise ConfigurationError(f"Budget must be 'unfold,depth,states', got: {text}")
        try:
            unfold, depth, states = (int(part) for part in parts)
        except ValueError:
            raise ConfigurationError(f"Budget values must be integers, got: {text}")
        return cls(unfold, depth, states)

    @classmethod
    def from_preset(cls, name: str, path: Path = BUDGET_PRESETS_PATH) -> "ExplorationBudget":
        """
        YAMLのプリセットから予算を作る

        Raises:
            ConfigurationError: プリセットが存在しない場合
        """
        with open(path, encoding="utf-8") as f:
            presets: dict[str, dict[str, Any]] = yaml.safe_load(f) or {}
        if name not in presets:
            raise ConfigurationError(
                f"Unknown budget preset: {name} (available: {', '.join(sorted(presets))})"
            )
        return cls(**presets[name])

    def describe(self) -> str:
        return f"{self.max_rec_unfold},{self.max_depth},{self.max_states}"


DEFAULT_BUDGET = ExplorationBudget()


# ---------------------------------------------------------------------------
# セッションの遷移ラベル λ
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommLabel:
    """通信ラベル p,q:v"""

    sender: str
    receiver: str
    message: str

    def __str__(self) -> str:
        return f"{self.sender},{self.receiver}:{self.message}"


@dataclass(frozen=True)
class EstablishLabel:
    """確立ラベル p̃:B"""

    parties: tuple[str, ...]
    session: str

    def __str__(self) -> str:
        return f"{','.join(self.parties)}:{self.session}"


SessionLabel = Union[CommLabel, EstablishLabel]

# プロセスの遷移ラベルはアクションそのもの
TransitionLabel = Union[Action, SessionLabel]


@dataclass
class ProcessTransitions:
    """一歩遷移の結果（予算切れなら部分結果）"""

    transitions: list[tuple[Action, Process]] = field(default_factory=list)
    truncated: bool = False


@dataclass
class SessionTransitions:
    """セッションの一歩遷移の結果"""

    transitions: list[tuple[SessionLabel, Session]] = field(default_factory=list)
    truncated: bool = False


@dataclass
class Exploration:
    """
    有界探索の結果

    graphはnetworkxのMultiDiGraphで、ノードは正規形の指紋、
    ノード属性"term"に代表項、辺属性"label"に遷移ラベルを持つ。
    """

    root: Any  # 根ノードのキー
    graph: Any  # networkx.MultiDiGraph
    truncated: bool = False
    depth_reached: int = 0

    @property
    def state_count(self) -> int:
        return int(self.graph.number_of_nodes())

    def term(self, node: Any) -> Any:
        """ノードの代表項"""
        return self.graph.nodes[node]["term"]

    def successors(self, node: Any) -> list[tuple[Any, Any]]:
        """(ラベル, 後続ノード) の一覧（挿入順）"""
        return [
            (data["label"], target)
            for _, target, data in self.graph.out_edges(node, data=True)
        ]

    def is_frontier(self, node: Any) -> bool:
        """展開されずに残った、または後続の一部が予算で落ちたノードかどうか"""
        attributes = self.graph.nodes[node]
        return not attributes.get("expanded", False) or bool(attributes.get("partial", False))

    def trace_to(self, node: Any) -> list[Any]:
        """根からノードへの最短ラベル列"""
        path = nx.shortest_path(self.graph, self.root, node)
        labels: list[Any] = []
        for source, target in zip(path, path[1:]):
            edge = next(iter(self.graph.get_edge_data(source, target).values()))
            labels.append(edge["label"])
        return labels

