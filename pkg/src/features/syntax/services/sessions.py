"""セッション項の補助関数（参加者・自由変数・参加者の置換）"""

from typing import Iterator, Mapping

from ..domain.session import (
    Communication,
    Concatenation,
    End,
    Establishment,
    Product,
    Session,
    SessionRecursion,
    SessionUnion,
    TypeVariable,
    participant_key,
)


def children(session: Session) -> list[Session]:
    """直下の部分セッション"""
    if isinstance(session, Communication):
        return [session.continuation]
    if isinstance(session, Establishment):
        return [session.nested]
    if isinstance(session, (Concatenation, SessionUnion, Product)):
        return [session.left, session.right]
    if isinstance(session, SessionRecursion):
        return [session.body]
    return []


def subsessions(session: Session) -> Iterator[Session]:
    """部分セッションを前順に列挙（自身を含む）"""
    yield session
    for child in children(session):
        yield from subsessions(child)


def participants_in_order(session: Session) -> list[str]:
    """参加者名を初出順に返す"""
    seen: list[str] = []
    for node in subsessions(session):
        if isinstance(node, Communication):
            names: tuple[str, ...] = (node.sender, node.receiver)
        elif isinstance(node, Establishment):
            names = node.parties
        else:
            continue
        for name in names:
            if name not in seen:
                seen.append(name)
    return seen


def pid(session: Session) -> frozenset[str]:
    """
    pid(S): セッションに現れる参加者名

    確立の本体Bの参加者は別の名前空間なので含めない。
    """
    return frozenset(participants_in_order(session))


def sorted_participants(session: Session) -> list[str]:
    """pid(S)を数値順・辞書順に並べたもの"""
    return sorted(pid(session), key=participant_key)


def session_free_variables(session: Session) -> frozenset[str]:
    """セッションの自由型変数"""
    if isinstance(session, TypeVariable):
        return frozenset({session.name})
    if isinstance(session, SessionRecursion):
        return session_free_variables(session.body) - {session.variable}
    result: frozenset[str] = frozenset()
    for child in children(session):
        result |= session_free_variables(child)
    return result


def is_closed(session: Session) -> bool:
    """全ての型変数が束縛されているか"""
    return not session_free_variables(session)


def is_communicating(session: Session) -> bool:
    """確立を含まない（通信セッション）"""
    return not any(isinstance(node, Establishment) for node in subsessions(session))


def is_integrating(session: Session) -> bool:
    """裸の通信を含まず、全ての確立の本体が通信セッション（統合セッション）"""
    for node in subsessions(session):
        if isinstance(node, Communication):
            return False
        if isinstance(node, Establishment) and not is_communicating(node.body):
            return False
    return True


def establishments(session: Session) -> list[Establishment]:
    """確立の出現を前順に返す"""
    return [node for node in subsessions(session) if isinstance(node, Establishment)]


def map_participants(session: Session, mapping: Mapping[str, str]) -> Session:
    """参加者名の同時置換（確立の本体には立ち入らない）"""
    if isinstance(session, Communication):
        return Communication(
            mapping.get(session.sender, session.sender),
            mapping.get(session.receiver, session.receiver),
            session.message,
            map_participants(session.continuation, mapping),
        )
    if isinstance(session, Establishment):
        return Establishment(
            tuple(mapping.get(p, p) for p in session.parties),
            session.session,
            session.body,
            map_participants(session.nested, mapping),
        )
    if isinstance(session, Concatenation):
        return Concatenation(
            map_participants(session.left, mapping), map_participants(session.right, mapping)
        )
    if isinstance(session, SessionUnion):
        return SessionUnion(
            map_participants(session.left, mapping), map_participants(session.right, mapping)
        )
    if isinstance(session, Product):
        return Product(
            map_participants(session.left, mapping), map_participants(session.right, mapping)
        )
    if isinstance(session, SessionRecursion):
        return SessionRecursion(session.variable, map_participants(session.body, mapping))
    return session


def rename_participants(session: Session, parties: tuple[str, ...]) -> Session:
    """
    S⟨p̃⟩: pid(S)を整列した順にp̃で置き換える

    Args:
        session: 通信セッション
        parties: 新しい参加者名の列

    Returns:
        Session: 参加者を置換したセッション

    Raises:
        ValueError: 参加者数が一致しない場合
    """
    current = sorted_participants(session)
    if len(current) != len(parties):
        raise ValueError(
            f"Session has {len(current)} participants but {len(parties)} names were given"
        )
    return map_participants(session, dict(zip(current, parties)))


def substitute_type_variable(session: Session, variable: str, replacement: Session) -> Session:
    """S{T/t}（捕獲は起こらない前提: 型変数は閉じたセッションのみを代入する）"""
    if isinstance(session, TypeVariable):
        return replacement if session.name == variable else session
    if isinstance(session, SessionRecursion):
        if session.variable == variable:
            return session
        return SessionRecursion(
            session.variable, substitute_type_variable(session.body, variable, replacement)
        )
    if isinstance(session, Communication):
        return Communication(
            session.sender,
            session.receiver,
            session.message,
            substitute_type_variable(session.continuation, variable, replacement),
        )
    if isinstance(session, Establishment):
        return Establishment(
            session.parties,
            session.session,
            session.body,
            substitute_type_variable(session.nested, variable, replacement),
        )
    if isinstance(session, (Concatenation, SessionUnion, Product)):
        return type(session)(
            substitute_type_variable(session.left, variable, replacement),
            substitute_type_variable(session.right, variable, replacement),
        )
    return session


def is_end(session: Session) -> bool:
    return isinstance(session, End)


def session_node_count(session: Session) -> int:
    """ASTノード数"""
    return sum(1 for _ in subsessions(session))
