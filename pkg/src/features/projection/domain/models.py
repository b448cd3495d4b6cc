"""射影のドメインモデル"""

from dataclasses import dataclass, field

from ...syntax.domain.process import Process
from ...syntax.domain.session import Session


@dataclass(frozen=True)
class MarkedSession:
    """
    イベント接頭辞の出現ごとにチャネル名を割り当てたセッション

    キーは部分項の位置（"$.cont.left" など）。通信接頭辞の印は単射で、
    確立の印はΓの束縛に従うので同じチャネルが複数の出現を印付けることがある。
    """

    session: Session
    name: str
    marks: dict[str, str] = field(default_factory=dict, hash=False)  # 通信接頭辞
    establishment_marks: dict[str, str] = field(default_factory=dict, hash=False)  # 確立

    def __post_init__(self) -> None:
        if len(set(self.marks.values())) != len(self.marks):
            raise ValueError(f"Marking of {self.name} is not injective")


@dataclass(frozen=True)
class ChannelSubstitution:
    """一つのセッションの全ロールに一様に適用するチャネル置換"""

    mapping: dict[str, str] = field(default_factory=dict, hash=False)
    signature: tuple[str, ...] = ()  # 置換後のチャネル組（ロールのチャネルシグネチャ）
    pairwise: bool = False  # 参加者の組ごとのチャネルに統合したか

    def apply(self, channel: str) -> str:
        return self.mapping.get(channel, channel)


@dataclass(frozen=True)
class Role:
    """ロール（射影されたプロセス）"""

    process: Process
    participant: str  # 所有する参加者
    session: str  # 射影元のセッション名
    signature: tuple[str, ...] = ()  # 通信セッションのロールの自由チャネル組
