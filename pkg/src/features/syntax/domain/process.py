"""プロセス計算のドメインモデル（アクションとプロセスAST）"""

from dataclasses import dataclass, field
from typing import Optional, Union

from ....shared.exceptions.errors import ValidationError

# ---------------------------------------------------------------------------
# アクション
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InteractionCause:
    """
    内部遷移（τ）の発生元

    比較には使わない付帯情報。適合性検査とメッセージフロー検査が参照する。
    """

    kind: str  # "com" | "sess" | "prefix"
    channel: Optional[str] = None  # 通信・確立に使われたチャネル
    message: Optional[str] = None  # 通信メッセージ
    parties: tuple[Optional[str], ...] = ()  # 関与したコンポーネントのラベル（送信者・受信者 / 招待順）


@dataclass(frozen=True)
class Send:
    """送信 a!v"""

    channel: str
    message: str


@dataclass(frozen=True)
class Receive:
    """受信 a?v"""

    channel: str
    message: str


@dataclass(frozen=True)
class Invite:
    """招待 ā_[2..n](c̃)"""

    channel: str
    parties: int  # 参加者数 n
    channels: tuple[str, ...]  # 通信チャネル組 c̃（継続部で束縛）

    def __post_init__(self) -> None:
        if self.parties < 2:
            raise ValidationError(f"Invitation on {self.channel} needs at least 2 parties")
        if len(set(self.channels)) != len(self.channels):
            raise ValidationError(
                f"Invitation on {self.channel} repeats a channel: {self.channels}"
            )


@dataclass(frozen=True)
class Accept:
    """受諾 a_[k](c̃)"""

    channel: str
    index: int  # 参加者番号 k
    channels: tuple[str, ...]  # 通信チャネル組 c̃（継続部で束縛）

    def __post_init__(self) -> None:
        if self.index < 2:
            raise ValidationError(f"Acceptance on {self.channel} needs an index of at least 2")
        if len(set(self.channels)) != len(self.channels):
            raise ValidationError(
                f"Acceptance on {self.channel} repeats a channel: {self.channels}"
            )


@dataclass(frozen=True)
class Silent:
    """内部動作 τ"""

    cause: Optional[InteractionCause] = field(default=None, compare=False, hash=False)


Action = Union[Send, Receive, Invite, Accept, Silent]


def subject_channel(action: Action) -> Optional[str]:
    """アクションの主語チャネル（fc(π)）を返す。τはNone"""
    if isinstance(action, Silent):
        return None
    return action.channel


def is_session_action(action: Action) -> bool:
    """招待・受諾（セッションアクション）かどうか"""
    return isinstance(action, (Invite, Accept))


def is_communication_action(action: Action) -> bool:
    """送信・受信かどうか"""
    return isinstance(action, (Send, Receive))


# ---------------------------------------------------------------------------
# プロセス
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Inaction:
    """停止プロセス 0"""


@dataclass(frozen=True)
class Variable:
    """プロセス変数 X"""

    name: str


@dataclass(frozen=True)
class Recursion:
    """再帰 rec X P"""

    variable: str
    body: "Process"


@dataclass(frozen=True)
class Labelled:
    """ラベル付きプロセス l:P"""

    label: str
    body: "Process"


@dataclass(frozen=True)
class Prefix:
    """前置 π.P"""

    action: Action
    continuation: "Process"


@dataclass(frozen=True)
class Hiding:
    """隠蔽 (νa)P"""

    channel: str
    body: "Process"


@dataclass(frozen=True)
class Parallel:
    """並行合成 P | Q"""

    left: "Process"
    right: "Process"


@dataclass(frozen=True)
class Sum:
    """選択 P + Q"""

    left: "Process"
    right: "Process"


Process = Union[Inaction, Variable, Recursion, Labelled, Prefix, Hiding, Parallel, Sum]

NIL = Inaction()


def parallel(*processes: Process) -> Process:
    """右結合の並行合成を作る（空なら0）"""
    if not processes:
        return NIL
    result = processes[-1]
    for process in reversed(processes[:-1]):
        result = Parallel(process, result)
    return result


def summation(*processes: Process) -> Process:
    """右結合の選択を作る（空なら0）"""
    if not processes:
        return NIL
    result = processes[-1]
    for process in reversed(processes[:-1]):
        result = Sum(process, result)
    return result


def hide(channels: tuple[str, ...] | list[str], body: Process) -> Process:
    """(νa1)...(νan)P を作る"""
    result = body
    for channel in reversed(list(channels)):
        result = Hiding(channel, result)
    return result


def prefix_chain(actions: list[Action], continuation: Process = NIL) -> Process:
    """π1.π2....πn.P を作る"""
    result = continuation
    for action in reversed(actions):
        result = Prefix(action, result)
    return result


def parallel_components(process: Process) -> list[Process]:
    """最上位の並行合成を平坦化する"""
    if isinstance(process, Parallel):
        return parallel_components(process.left) + parallel_components(process.right)
    return [process]


def sum_components(process: Process) -> list[Process]:
    """最上位の選択を平坦化する"""
    if isinstance(process, Sum):
        return sum_components(process.left) + sum_components(process.right)
    return [process]


def node_count(process: Process) -> int:
    """ASTノード数"""
    if isinstance(process, (Inaction, Variable)):
        return 1
    if isinstance(process, (Parallel, Sum)):
        return 1 + node_count(process.left) + node_count(process.right)
    if isinstance(process, Prefix):
        return 1 + node_count(process.continuation)
    return 1 + node_count(process.body)
