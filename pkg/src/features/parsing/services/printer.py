"""項の表示（パーサーで再読込できる表層構文）"""

from typing import Union

from ...semantics.domain.models import CommLabel, EstablishLabel
from ...syntax.domain.process import (
    Accept,
    Action,
    Hiding,
    Inaction,
    Invite,
    Labelled,
    Parallel,
    Prefix,
    Process,
    Receive,
    Recursion,
    Send,
    Silent,
    Variable,
    parallel_components,
    sum_components,
)
from ...syntax.domain.session import (
    Communication,
    Concatenation,
    End,
    Establishment,
    Product,
    Session,
    SessionRecursion,
    SessionUnion,
    TypeVariable,
)
from ...syntax.domain.system import SystemDef
from ..domain.models import SourceFile


def format_action(action: Action) -> str:
    """アクション（遷移ラベル）の表示"""
    if isinstance(action, Send):
        return f"{action.channel}!{action.message}"
    if isinstance(action, Receive):
        return f"{action.channel}?{action.message}"
    if isinstance(action, Invite):
        return f"{action.channel}!inv[2..{action.parties}]({','.join(action.channels)})"
    if isinstance(action, Accept):
        return f"{action.channel}?acc[{action.index}]({','.join(action.channels)})"
    return "tau"


def format_label(label: Union[Action, CommLabel, EstablishLabel]) -> str:
    """遷移ラベルの表示（τは発生元があれば併記）"""
    if isinstance(label, (CommLabel, EstablishLabel)):
        return str(label)
    if isinstance(label, Silent) and label.cause is not None:
        cause = label.cause
        parties = ",".join(p or "?" for p in cause.parties)
        detail = f"{cause.channel}:{cause.message}" if cause.message else f"{cause.channel}"
        return f"tau[{cause.kind} {detail} by {parties}]"
    return format_action(label)


# ---------------------------------------------------------------------------
# プロセス
# ---------------------------------------------------------------------------


def _process_unary(process: Process) -> str:
    if isinstance(process, Inaction):
        return "0"
    if isinstance(process, Variable):
        return process.name
    if isinstance(process, Recursion):
        return f"rec {process.variable} . {_process_unary(process.body)}"
    if isinstance(process, Labelled):
        return f"{process.label} : {_process_unary(process.body)}"
    if isinstance(process, Hiding):
        return f"(new {process.channel}) {_process_unary(process.body)}"
    if isinstance(process, Prefix):
        return f"{format_action(process.action)}.{_process_unary(process.continuation)}"
    return f"({format_process(process)})"


def _process_sum(process: Process) -> str:
    return " + ".join(_process_unary(summand) for summand in sum_components(process))


def format_process(process: Process) -> str:
    """プロセスの表示"""
    if isinstance(process, Parallel):
        return " | ".join(_process_sum(component) for component in parallel_components(process))
    return _process_sum(process)


# ---------------------------------------------------------------------------
# セッション
# ---------------------------------------------------------------------------


def _flatten(session: Session, kind: type) -> list[Session]:
    if isinstance(session, kind):
        left, right = session.left, session.right  # type: ignore[attr-defined]
        return _flatten(left, kind) + _flatten(right, kind)
    return [session]


def _session_unary(session: Session) -> str:
    if isinstance(session, End):
        return "end"
    if isinstance(session, TypeVariable):
        return session.name
    if isinstance(session, SessionRecursion):
        return f"rec {session.variable} . {_session_unary(session.body)}"
    if isinstance(session, Communication):
        head = f"<{session.sender},{session.receiver}:{session.message}>"
        return f"{head} -> {_session_unary(session.continuation)}"
    if isinstance(session, Establishment):
        nested = "" if isinstance(session.nested, End) else f" {format_session(session.nested)} "
        return f"<{','.join(session.parties)} : {session.session}> {{{nested}}}"
    return f"({format_session(session)})"


def _session_concatenation(session: Session) -> str:
    return " ; ".join(_session_unary(item) for item in _flatten(session, Concatenation))


def _session_product(session: Session) -> str:
    return " (x) ".join(_session_concatenation(item) for item in _flatten(session, Product))


def format_session(session: Session) -> str:
    """セッションの表示"""
    return " (+) ".join(_session_product(item) for item in _flatten(session, SessionUnion))


# ---------------------------------------------------------------------------
# ファイル
# ---------------------------------------------------------------------------


def format_system(system: SystemDef, process_names: dict[int, str] | None = None) -> str:
    """
    システム宣言の表示

    Args:
        system: システム
        process_names: プロセスのid()から宣言名への対応（あれば名前で参照する）
    """
    parts = []
    for participant, process in system.components:
        name = (process_names or {}).get(id(process))
        parts.append(f"{participant}: {name if name else '(' + format_process(process) + ')'}")
    return f"system {system.name} = {' | '.join(parts)}"


def format_source(source: SourceFile) -> str:
    """ソースファイル全体の表示"""
    lines: list[str] = []
    for name, declaration in source.sessions.items():
        lines.append(f"session {name} = {format_session(declaration.body)}")
    for binding in source.channels:
        lines.append(f"channel {binding.channel} : {binding.session}")
    process_names: dict[int, str] = {}
    for name, process in source.processes.items():
        process_names[id(process)] = name
        lines.append(f"process {name} = {format_process(process)}")
    for system in source.systems.values():
        lines.append(format_system(system, process_names))
    return "\n".join(lines) + "\n"
