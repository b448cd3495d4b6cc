"""システムと型環境のドメインモデル"""

from dataclasses import dataclass, field
from typing import Optional

from ....shared.exceptions.errors import DuplicateDeclarationError
from .process import Labelled, Process, parallel
from .session import Session


@dataclass(frozen=True)
class SystemDef:
    """システム r1:P1 | ... | rn:Pn"""

    name: str
    components: tuple[tuple[str, Process], ...]

    def __post_init__(self) -> None:
        names = [participant for participant, _ in self.components]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise DuplicateDeclarationError(
                f"System {self.name} repeats participants: {', '.join(duplicates)}"
            )

    @property
    def participants(self) -> list[str]:
        """参加者名（宣言順）"""
        return [participant for participant, _ in self.components]

    def component(self, participant: str) -> Optional[Process]:
        """参加者のプロセスを取得"""
        for name, process in self.components:
            if name == participant:
                return process
        return None

    def replace(self, participant: str, process: Process) -> "SystemDef":
        """一つのコンポーネントを差し替えたシステムを返す"""
        return SystemDef(
            self.name,
            tuple(
                (name, process if name == participant else current)
                for name, current in self.components
            ),
        )

    def without(self, participant: str) -> "SystemDef":
        """参加者を取り除いたシステムを返す"""
        return SystemDef(
            self.name, tuple((n, p) for n, p in self.components if n != participant)
        )

    def to_process(self) -> Process:
        """ラベル付き並行合成としてのプロセス"""
        return parallel(*[Labelled(name, process) for name, process in self.components])


@dataclass(frozen=True)
class ChannelBinding:
    """セッションチャネルの束縛 a ▷ B"""

    channel: str
    session: str  # 通信セッションの宣言名
    body: Session


@dataclass(frozen=True)
class TypeEnvironment:
    """
    型環境 Γ

    セッションチャネルの束縛（宣言順）とスコープ内のプロセス変数を持つ。
    """

    bindings: tuple[ChannelBinding, ...] = ()
    variables: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        channels = [binding.channel for binding in self.bindings]
        duplicates = sorted({c for c in channels if channels.count(c) > 1})
        if duplicates:
            raise DuplicateDeclarationError(f"Channel bound twice: {', '.join(duplicates)}")

    def lookup(self, channel: str) -> Optional[ChannelBinding]:
        """チャネルの束縛を取得（Γ ⊢ a ▷ B）"""
        for binding in self.bindings:
            if binding.channel == channel:
                return binding
        return None

    @property
    def domain(self) -> frozenset[str]:
        """dom(Γ)"""
        return frozenset(b.channel for b in self.bindings) | self.variables

    @property
    def channels(self) -> frozenset[str]:
        """束縛されたセッションチャネル"""
        return frozenset(b.channel for b in self.bindings)

    @property
    def is_pure(self) -> bool:
        """チャネルのみを含むかどうか"""
        return not self.variables

    def channels_for(self, session: str) -> list[str]:
        """指定セッションに束縛されたチャネル（宣言順）"""
        return [b.channel for b in self.bindings if b.session == session]

    def with_variable(self, variable: str) -> "TypeEnvironment":
        """Γ, X"""
        return TypeEnvironment(self.bindings, self.variables | {variable})

    def restricted_to(self, channels: set[str]) -> "TypeEnvironment":
        """指定チャネルのみを残した環境"""
        return TypeEnvironment(
            tuple(b for b in self.bindings if b.channel in channels), self.variables
        )
