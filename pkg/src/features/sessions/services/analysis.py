"""セッションの整形式性・opid・競合のなさの検査"""

from functools import lru_cache
from typing import Iterator, Optional

from ....shared.logging.config import get_logger
from ...parsing.domain.models import SourceFile
from ...parsing.services.printer import format_session
from ...reports.domain.models import Diagnostic, Outcome, Report
from ...syntax.domain.session import (
    Communication,
    Concatenation,
    Establishment,
    Product,
    Session,
    SessionRecursion,
    SessionUnion,
)
from ...syntax.services.sessions import pid, subsessions

logger = get_logger(__name__)

OpidSet = frozenset[frozenset[str]]


def _walk(session: Session, path: str = "$", depth: int = 0) -> Iterator[tuple[Session, str, int]]:
    """部分項を位置と深さ付きで前順に列挙する（確立の本体を含む）"""
    yield session, path, depth
    if isinstance(session, Communication):
        yield from _walk(session.continuation, f"{path}.cont", depth + 1)
    elif isinstance(session, Establishment):
        yield from _walk(session.body, f"{path}.session", depth + 1)
        yield from _walk(session.nested, f"{path}.nested", depth + 1)
    elif isinstance(session, (Concatenation, SessionUnion, Product)):
        yield from _walk(session.left, f"{path}.left", depth + 1)
        yield from _walk(session.right, f"{path}.right", depth + 1)
    elif isinstance(session, SessionRecursion):
        yield from _walk(session.body, f"{path}.body", depth + 1)


def well_formed(session: Session, name: Optional[str] = None) -> Report:
    """
    整形式性の検査

    1. 通信 <p,q:v> は p ≠ q
    2. 確立 <p̃:B>{T} は p̃ が相異なり |p̃| = |pid(B)|
    3. 連接の左辺は積を含まない

    Args:
        session: 対象セッション
        name: レポートに表示する名前

    Returns:
        Report: 違反した条項ごとの診断
    """
    diagnostics: list[Diagnostic] = []
    for node, path, _ in _walk(session):
        if isinstance(node, Communication) and node.sender == node.receiver:
            diagnostics.append(
                Diagnostic(
                    code="wellformed.1",
                    message=f"Self interaction of {node.sender}",
                    path=path,
                    found=format_session(node),
                )
            )
        elif isinstance(node, Establishment):
            if len(set(node.parties)) != len(node.parties):
                diagnostics.append(
                    Diagnostic(
                        code="wellformed.2",
                        message="Establishment repeats a participant",
                        path=path,
                        found=format_session(node),
                    )
                )
            elif len(node.parties) != len(pid(node.body)):
                diagnostics.append(
                    Diagnostic(
                        code="wellformed.2",
                        message=f"Establishment of {node.session} names {len(node.parties)} "
                        f"participants but the session has {len(pid(node.body))}",
                        path=path,
                        found=format_session(node),
                    )
                )
        elif isinstance(node, Concatenation):
            if any(isinstance(sub, Product) for sub in subsessions(node.left)):
                diagnostics.append(
                    Diagnostic(
                        code="wellformed.3",
                        message="Left side of a concatenation contains a product",
                        path=path,
                        found=format_session(node.left),
                    )
                )
    outcome = Outcome.FAIL if diagnostics else Outcome.PASS
    return Report(
        check="wellformed",
        subject=name or format_session(session),
        outcome=outcome,
        diagnostics=diagnostics,
    )


@lru_cache(maxsize=4096)
def opid(session: Session) -> OpidSet:
    """opid(S)"""
    if isinstance(session, Communication):
        return frozenset({frozenset({session.sender, session.receiver})})
    if isinstance(session, Establishment):
        return frozenset({frozenset(session.parties)})
    if isinstance(session, SessionRecursion):
        return opid(session.body)
    if isinstance(session, (SessionUnion, Product)):
        return opid(session.left) | opid(session.right)
    if isinstance(session, Concatenation):
        left = opid(session.left)
        return left if left else opid(session.right)
    return frozenset()


def _race_violation(session: Session) -> Optional[tuple[str, str]]:
    """このノード自身の条項の違反（条項名と説明）。子の検査は含まない"""
    if isinstance(session, Communication):
        for group in opid(session.continuation):
            if not {session.sender, session.receiver} & group:
                return (
                    "racefree.3",
                    f"<{session.sender},{session.receiver}:{session.message}> is followed by an "
                    f"interaction of {{{', '.join(sorted(group))}}} that shares no participant",
                )
    elif isinstance(session, SessionUnion):
        for left in opid(session.left):
            for right in opid(session.right):
                if not left & right:
                    return (
                        "racefree.5",
                        f"Branches start with disjoint participants {{{', '.join(sorted(left))}}} "
                        f"and {{{', '.join(sorted(right))}}}",
                    )
    elif isinstance(session, Concatenation) and pid(session.left):
        for group in opid(session.right):
            for sub in subsessions(session.left):
                participants = pid(sub)
                if participants and not participants & group:
                    return (
                        "racefree.8",
                        f"Subsession {format_session(sub)} shares no participant with the "
                        f"following interaction of {{{', '.join(sorted(group))}}}",
                    )
    return None


def _race_children(session: Session) -> list[tuple[Session, str]]:
    """競合のなさを再帰的に要求する子（条項(7)は右辺のみ）"""
    if isinstance(session, Communication):
        return [(session.continuation, "cont")]
    if isinstance(session, Establishment):
        return [(session.body, "session"), (session.nested, "nested")]
    if isinstance(session, (SessionUnion, Product)):
        return [(session.left, "left"), (session.right, "right")]
    if isinstance(session, Concatenation):
        if not pid(session.left):
            return [(session.right, "right")]
        return [(session.left, "left"), (session.right, "right")]
    if isinstance(session, SessionRecursion):
        return [(session.body, "body")]
    return []


def race_free(session: Session, name: Optional[str] = None) -> Report:
    """
    競合のなさの検査

    全ての違反を浅い順に診断として並べ、先頭が最も浅い違反になる。
    """
    found: list[tuple[int, Diagnostic]] = []
    stack: list[tuple[Session, str, int]] = [(session, "$", 0)]
    visited: set[tuple[int, str]] = set()
    while stack:
        node, path, depth = stack.pop()
        violation = _race_violation(node)
        if violation is not None:
            code, message = violation
            found.append(
                (
                    depth,
                    Diagnostic(code=code, message=message, path=path, found=format_session(node)),
                )
            )
        for child, step in reversed(_race_children(node)):
            key = (id(child), f"{path}.{step}")
            if key not in visited:
                visited.add(key)
                stack.append((child, f"{path}.{step}", depth + 1))
    found.sort(key=lambda item: item[0])
    diagnostics = [diagnostic for _, diagnostic in found]
    return Report(
        check="racefree",
        subject=name or format_session(session),
        outcome=Outcome.FAIL if diagnostics else Outcome.PASS,
        diagnostics=diagnostics,
    )


def validate_declarations(source: SourceFile, names: Optional[list[str]] = None) -> list[Report]:
    """
    宣言されたセッションに整形式性と競合のなさの検査を行う

    Args:
        source: 解析済みのソースファイル
        names: 対象のセッション名（省略時は全ての宣言）

    Raises:
        UnknownSessionNameError: 未宣言の名前が指定された場合
    """
    reports: list[Report] = []
    selected = names if names is not None else list(source.sessions)
    for name in selected:
        declaration = source.session(name)
        wellformed_report = well_formed(declaration.body, name)
        reports.append(wellformed_report)
        if wellformed_report.passed:
            reports.append(race_free(declaration.body, name))
        logger.debug(f"Validated session {name}: {wellformed_report.outcome.value}")
    return reports
