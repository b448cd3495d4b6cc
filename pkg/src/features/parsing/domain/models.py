"""ソースファイルのドメインモデル"""

from dataclasses import dataclass, field
from typing import Optional

from ....shared.exceptions.errors import SessionToolError, UnknownSessionNameError
from ...syntax.domain.process import Process
from ...syntax.domain.session import SessionDeclaration
from ...syntax.domain.system import ChannelBinding, SystemDef, TypeEnvironment


@dataclass
class SourceFile:
    """
    .sessファイルの内容

    宣言は種類ごとに宣言順で保持する。
    """

    sessions: dict[str, SessionDeclaration] = field(default_factory=dict)
    channels: list[ChannelBinding] = field(default_factory=list)
    processes: dict[str, Process] = field(default_factory=dict)
    systems: dict[str, SystemDef] = field(default_factory=dict)
    path: Optional[str] = None  # 読み込んだファイルのパス

    def session(self, name: str) -> SessionDeclaration:
        """
        セッション宣言を取得

        Raises:
            UnknownSessionNameError: 宣言がない場合
        """
        declaration = self.sessions.get(name)
        if declaration is None:
            raise UnknownSessionNameError(f"Unknown session: {name}")
        return declaration

    def process(self, name: str) -> Process:
        """
        プロセス宣言を取得

        Raises:
            SessionToolError: 宣言がない場合
        """
        if name not in self.processes:
            raise SessionToolError(f"Unknown process: {name}")
        return self.processes[name]

    def system(self, name: str) -> SystemDef:
        """
        システム宣言を取得

        Raises:
            SessionToolError: 宣言がない場合
        """
        if name not in self.systems:
            raise SessionToolError(f"Unknown system: {name}")
        return self.systems[name]

    def environment(self) -> TypeEnvironment:
        """全てのchannel宣言からなる型環境 Γ"""
        return TypeEnvironment(tuple(self.channels))

