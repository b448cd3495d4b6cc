"""表層構文のパーサー（lark）"""

from pathlib import Path
from typing import Any, Optional, Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from ....shared.exceptions.errors import (
    DuplicateDeclarationError,
    SessionKindError,
    SessionToolError,
    SurfaceSyntaxError,
    UnknownSessionNameError,
)
from ....shared.logging.config import get_logger
from ...syntax.domain.process import (
    NIL,
    Accept,
    Hiding,
    Invite,
    Labelled,
    Parallel,
    Prefix,
    Process,
    Receive,
    Recursion,
    Send,
    Silent,
    Sum,
    Variable,
)
from ...syntax.domain.session import (
    END,
    Communication,
    Concatenation,
    Establishment,
    Product,
    Session,
    SessionDeclaration,
    SessionRecursion,
    SessionUnion,
    TypeVariable,
)
from ...syntax.domain.system import ChannelBinding, SystemDef
from ...syntax.services.names import FreshNames, all_names, rename_apart
from ...syntax.services.sessions import is_communicating, subsessions
from ..domain.models import SourceFile

logger = get_logger(__name__)

GRAMMAR_PATH = Path(__file__).resolve().parent.parent / "grammar" / "sesstool.lark"


@v_args(inline=True)
class _SourceTransformer(Transformer):
    """構文木をASTに変換する（宣言の検証は後段）"""

    # 宣言
    def start(self, *declarations: tuple) -> list[tuple]:
        return list(declarations)

    def session_decl(self, name: Token, body: Session) -> tuple:
        return ("session", str(name), body, name.line, name.column)

    def channel_decl(self, channel: Token, session: Token) -> tuple:
        return ("channel", str(channel), str(session), channel.line, channel.column)

    def process_decl(self, name: Token, body: Process) -> tuple:
        return ("process", str(name), body, name.line, name.column)

    def system_decl(self, name: Token, *components: tuple) -> tuple:
        return ("system", str(name), list(components), name.line, name.column)

    def component_ref(self, participant: Token, process: Token) -> tuple:
        return (str(participant), str(process), process.line, process.column)

    def component_inline(self, participant: Token, process: Process) -> tuple:
        return (str(participant), process, participant.line, participant.column)

    # プロセス
    def par(self, left: Process, right: Process) -> Process:
        return Parallel(left, right)

    def choice(self, left: Process, right: Process) -> Process:
        return Sum(left, right)

    def nil(self) -> Process:
        return NIL

    def var(self, name: Token) -> Process:
        return Variable(str(name))

    def rec(self, name: Token, body: Process) -> Process:
        return Recursion(str(name), body)

    def label(self, name: Token, body: Process) -> Process:
        # l':l:P ≡ l':P を適用（外側のラベルを残す）
        if isinstance(body, Labelled):
            body = body.body
        return Labelled(str(name), body)

    def new(self, name: Token, body: Process) -> Process:
        return Hiding(str(name), body)

    def prefix(self, action: Any, continuation: Process) -> Process:
        return Prefix(action, continuation)

    def send(self, channel: Token, message: Token) -> Send:
        return Send(str(channel), str(message))

    def receive(self, channel: Token, message: Token) -> Receive:
        return Receive(str(channel), str(message))

    def invite(self, channel: Token, first: Token, last: Token, names: tuple[str, ...]) -> Invite:
        if int(first) != 2:
            raise SurfaceSyntaxError(
                f"Invitation range must start at 2, got {first}", first.line, first.column
            )
        return Invite(str(channel), int(last), names)

    def accept(self, channel: Token, index: Token, names: tuple[str, ...]) -> Accept:
        return Accept(str(channel), int(index), names)

    def tau(self) -> Silent:
        return Silent()

    def names(self, *names: Token) -> tuple[str, ...]:
        return tuple(str(n) for n in names)

    # セッション
    def union(self, left: Session, right: Session) -> Session:
        return SessionUnion(left, right)

    def product(self, left: Session, right: Session) -> Session:
        return Product(left, right)

    def concat(self, left: Session, right: Session) -> Session:
        return Concatenation(left, right)

    def end(self) -> Session:
        return END

    def tvar(self, name: Token) -> Session:
        return TypeVariable(str(name))

    def srec(self, name: Token, body: Session) -> Session:
        return SessionRecursion(str(name), body)

    def comm(self, parties: list[Token], message: Token, continuation: Session) -> Session:
        if len(parties) != 2:
            first = parties[0]
            raise SurfaceSyntaxError(
                "Communication needs exactly two participants", first.line, first.column
            )
        return Communication(str(parties[0]), str(parties[1]), str(message), continuation)

    def establish(self, parties: list[Token], session: Token, nested: Optional[Session]) -> Any:
        # 本体は宣言の解決後に埋める
        return _PendingEstablishment(
            tuple(str(p) for p in parties),
            str(session),
            nested or END,
            session.line,
            session.column,
        )

    def parties(self, *parties: Token) -> list[Token]:
        return list(parties)


class _PendingEstablishment:
    """宣言名が未解決の確立"""

    def __init__(
        self, parties: tuple[str, ...], session: str, nested: Session, line: int, column: int
    ) -> None:
        self.parties = parties
        self.session = session
        self.nested = nested
        self.line = line
        self.column = column


class SessionParser:
    """
    .sessファイルのパーサー

    lark(LALR)で構文解析し、宣言の重複・セッションの種類・名前解決を検証する。
    """

    def __init__(self, grammar_path: Path = GRAMMAR_PATH) -> None:
        """
        Args:
            grammar_path: 文法ファイルのパス
        """
        with open(grammar_path, encoding="utf-8") as f:
            grammar = f.read()
        self.lark = Lark(grammar, parser="lalr", propagate_positions=True)
        logger.debug("SessionParser initialized")

    def parse(self, text: str, path: Optional[str] = None) -> SourceFile:
        """
        テキストを解析する

        Args:
            text: ファイル内容
            path: エラー表示用のパス

        Returns:
            SourceFile: 解析結果（プロセスは束縛名を付け替え済み）

        Raises:
            SurfaceSyntaxError: 構文エラー
            DuplicateDeclarationError: 同種の宣言名の重複
            UnknownSessionNameError: 未宣言のセッション名の参照
            SessionKindError: 通信・統合セッションの制約違反
        """
        try:
            tree = self.lark.parse(text)
        except UnexpectedInput as e:
            raise self._syntax_error(e) from e
        try:
            declarations = _SourceTransformer().transform(tree)
        except VisitError as e:
            if isinstance(e.orig_exc, SessionToolError):
                raise e.orig_exc from e
            raise
        source = self._build(declarations)
        source.path = path
        logger.debug(
            f"Parsed {path or '<text>'}: {len(source.sessions)} sessions, "
            f"{len(source.channels)} channels, {len(source.processes)} processes, "
            f"{len(source.systems)} systems"
        )
        return source

    def parse_file(self, path: Union[str, Path]) -> SourceFile:
        """ファイルを読み込んで解析する"""
        with open(path, encoding="utf-8") as f:
            return self.parse(f.read(), str(path))

    def _syntax_error(self, error: UnexpectedInput) -> SurfaceSyntaxError:
        expected: list[str] = []
        if isinstance(error, UnexpectedCharacters):
            expected = list(error.allowed or [])
            message = f"Unexpected character {error.char!r}"
        elif isinstance(error, UnexpectedEOF):
            expected = list(error.expected or [])
            message = "Unexpected end of input"
        else:
            expected = list(getattr(error, "expected", None) or [])
            token = getattr(error, "token", None)
            message = f"Unexpected token {str(token)!r}" if token is not None else "Syntax error"
        line = getattr(error, "line", -1) or -1
        column = getattr(error, "column", -1) or -1
        return SurfaceSyntaxError(message, line, column, expected)

    def _build(self, declarations: list[tuple]) -> SourceFile:
        source = SourceFile()
        raw_sessions: dict[str, tuple[Session, int, int]] = {}
        raw_processes: dict[str, Process] = {}
        raw_systems: list[tuple] = []
        raw_channels: list[tuple] = []

        for kind, name, value, line, column in declarations:
            if kind == "session":
                if name in raw_sessions:
                    raise DuplicateDeclarationError(
                        f"{line}:{column}: session {name} declared twice"
                    )
                raw_sessions[name] = (value, line, column)
            elif kind == "process":
                if name in raw_processes:
                    raise DuplicateDeclarationError(
                        f"{line}:{column}: process {name} declared twice"
                    )
                raw_processes[name] = value
            elif kind == "system":
                if any(existing[1] == name for existing in raw_systems):
                    raise DuplicateDeclarationError(
                        f"{line}:{column}: system {name} declared twice"
                    )
                raw_systems.append((name, value, line, column))
            else:
                raw_channels.append((name, value, line, column))

        # 通信セッションを先に確定させる
        communicating: dict[str, Session] = {}
        for name, (body, line, column) in raw_sessions.items():
            if not _has_pending(body):
                if not is_communicating(body):
                    raise SessionKindError(f"{line}:{column}: session {name} mixes levels")
                communicating[name] = body
                source.sessions[name] = SessionDeclaration(name, body, communicating=True)

        for name, (body, line, column) in raw_sessions.items():
            if name in communicating:
                continue
            resolved = _resolve(body, communicating, raw_sessions)
            for node in subsessions(resolved):
                if isinstance(node, Communication):
                    raise SessionKindError(
                        f"{line}:{column}: integrating session {name} contains a bare communication"
                    )
            source.sessions[name] = SessionDeclaration(name, resolved, communicating=False)
        # 宣言順を保つ
        source.sessions = {name: source.sessions[name] for name in raw_sessions}

        seen_channels: set[str] = set()
        for channel, session, line, column in raw_channels:
            if channel in seen_channels:
                raise DuplicateDeclarationError(
                    f"{line}:{column}: channel {channel} declared twice"
                )
            seen_channels.add(channel)
            if session not in raw_sessions:
                raise UnknownSessionNameError(f"{line}:{column}: unknown session {session}")
            if session not in communicating:
                raise SessionKindError(
                    f"{line}:{column}: channel {channel} must be bound to a communicating session"
                )
            source.channels.append(ChannelBinding(channel, session, communicating[session]))

        names: set[str] = set()
        for process in raw_processes.values():
            names |= all_names(process)
        fresh = FreshNames(names)
        source.processes = {
            name: rename_apart(process, fresh) for name, process in raw_processes.items()
        }

        for name, components, line, column in raw_systems:
            resolved_components: list[tuple[str, Process]] = []
            for participant, target, c_line, c_column in components:
                if isinstance(target, str):
                    if target not in source.processes:
                        raise SessionToolError(f"{c_line}:{c_column}: unknown process {target}")
                    resolved_components.append((participant, source.processes[target]))
                else:
                    resolved_components.append((participant, rename_apart(target, fresh)))
            source.systems[name] = SystemDef(name, tuple(resolved_components))
        return source


def _has_pending(session: Any) -> bool:
    if isinstance(session, _PendingEstablishment):
        return True
    if isinstance(session, Communication):
        return _has_pending(session.continuation)
    if isinstance(session, (Concatenation, SessionUnion, Product)):
        return _has_pending(session.left) or _has_pending(session.right)
    if isinstance(session, SessionRecursion):
        return _has_pending(session.body)
    return False


def _resolve(
    session: Any, communicating: dict[str, Session], declared: dict[str, Any]
) -> Session:
    """確立の宣言名を本体に解決する"""
    if isinstance(session, _PendingEstablishment):
        if session.session not in declared:
            raise UnknownSessionNameError(
                f"{session.line}:{session.column}: unknown session {session.session}"
            )
        if session.session not in communicating:
            raise SessionKindError(
                f"{session.line}:{session.column}: establishment of {session.session} "
                "needs a communicating session"
            )
        if len(set(session.parties)) != len(session.parties):
            raise SessionKindError(
                f"{session.line}:{session.column}: establishment repeats a participant"
            )
        return Establishment(
            session.parties,
            session.session,
            communicating[session.session],
            _resolve(session.nested, communicating, declared),
        )
    if isinstance(session, Communication):
        return Communication(
            session.sender,
            session.receiver,
            session.message,
            _resolve(session.continuation, communicating, declared),
        )
    if isinstance(session, (Concatenation, SessionUnion, Product)):
        return type(session)(
            _resolve(session.left, communicating, declared),
            _resolve(session.right, communicating, declared),
        )
    if isinstance(session, SessionRecursion):
        return SessionRecursion(
            session.variable, _resolve(session.body, communicating, declared)
        )
    return session


_default_parser: Optional[SessionParser] = None


def get_parser() -> SessionParser:
    """共有パーサーを取得（文法の読み込みは一度だけ）"""
    global _default_parser
    if _default_parser is None:
        _default_parser = SessionParser()
    return _default_parser


def parse(text: str, path: Optional[str] = None) -> SourceFile:
    """テキストを解析する（共有パーサーを使用）"""
    return get_parser().parse(text, path)


def parse_file(path: Union[str, Path]) -> SourceFile:
    """ファイルを解析する（共有パーサーを使用）"""
    return get_parser().parse_file(path)
