"""セッション型のドメインモデル"""

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class End:
    """終了 end"""


@dataclass(frozen=True)
class Communication:
    """通信 <p,q:v> -> S"""

    sender: str
    receiver: str
    message: str
    continuation: "Session"


@dataclass(frozen=True)
class Establishment:
    """
    確立 <p̃:B>{T}

    sessionは確立される通信セッションの宣言名、bodyはその本体。
    """

    parties: tuple[str, ...]
    session: str
    body: "Session"
    nested: "Session"


@dataclass(frozen=True)
class Concatenation:
    """連接 S ; T"""

    left: "Session"
    right: "Session"


@dataclass(frozen=True)
class SessionUnion:
    """和 S (+) T"""

    left: "Session"
    right: "Session"


@dataclass(frozen=True)
class Product:
    """積 S (x) T"""

    left: "Session"
    right: "Session"


@dataclass(frozen=True)
class TypeVariable:
    """型変数 t"""

    name: str


@dataclass(frozen=True)
class SessionRecursion:
    """再帰 rec t . S"""

    variable: str
    body: "Session"


Session = Union[
    End,
    Communication,
    Establishment,
    Concatenation,
    SessionUnion,
    Product,
    TypeVariable,
    SessionRecursion,
]

END = End()


def union_of(*sessions: Session) -> Session:
    """右結合の和（空ならend）"""
    if not sessions:
        return END
    result = sessions[-1]
    for session in reversed(sessions[:-1]):
        result = SessionUnion(session, result)
    return result


def product_of(*sessions: Session) -> Session:
    """右結合の積（空ならend）"""
    if not sessions:
        return END
    result = sessions[-1]
    for session in reversed(sessions[:-1]):
        result = Product(session, result)
    return result


def concatenation_of(*sessions: Session) -> Session:
    """右結合の連接（空ならend）"""
    if not sessions:
        return END
    result = sessions[-1]
    for session in reversed(sessions[:-1]):
        result = Concatenation(session, result)
    return result


def participant_key(name: str) -> tuple[int, int, str]:
    """参加者名の並び順（数字は数値順、その後に名前）"""
    if name.isdigit():
        return (0, int(name), "")
    return (1, 0, name)


@dataclass(frozen=True)
class SessionDeclaration:
    """宣言されたセッション"""

    name: str
    body: Session
    communicating: bool  # 通信セッションならTrue、統合セッションならFalse
