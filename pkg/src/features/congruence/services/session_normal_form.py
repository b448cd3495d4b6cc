"""セッションの構造合同正規形"""

from ...syntax.domain.session import (
    END,
    Communication,
    Concatenation,
    End,
    Establishment,
    Product,
    Session,
    SessionRecursion,
    SessionUnion,
    TypeVariable,
    concatenation_of,
    product_of,
    union_of,
)
from ...syntax.services.sessions import session_free_variables
from ..domain.models import CanonicalForm


def _flatten(session: Session, kind: type) -> list[Session]:
    if isinstance(session, kind):
        left, right = session.left, session.right  # type: ignore[attr-defined]
        return _flatten(left, kind) + _flatten(right, kind)
    return [session]


def normalize_session_structure(session: Session) -> Session:
    """⊕・⊗・; の平坦化とendの除去、不要なμの除去"""
    if isinstance(session, Communication):
        return Communication(
            session.sender,
            session.receiver,
            session.message,
            normalize_session_structure(session.continuation),
        )
    if isinstance(session, Establishment):
        return Establishment(
            session.parties,
            session.session,
            session.body,
            normalize_session_structure(session.nested),
        )
    if isinstance(session, SessionRecursion):
        body = normalize_session_structure(session.body)
        if session.variable not in session_free_variables(body):
            return body
        return SessionRecursion(session.variable, body)
    if isinstance(session, (Concatenation, SessionUnion, Product)):
        kind = type(session)
        items: list[Session] = []
        for item in _flatten(session, kind):
            normalized = normalize_session_structure(item)
            if isinstance(normalized, End):
                continue
            items.extend(_flatten(normalized, kind))
        if kind is Concatenation:
            return concatenation_of(*items)
        if kind is SessionUnion:
            return union_of(*items)
        return product_of(*items)
    return session


def _canon(session: Session, env: dict[str, str], depth: int) -> tuple[str, Session]:
    if isinstance(session, End):
        return "end", END
    if isinstance(session, TypeVariable):
        return "$" + env.get(session.name, session.name), session
    if isinstance(session, Communication):
        key, continuation = _canon(session.continuation, env, depth)
        return (
            f"<{session.sender},{session.receiver}:{session.message}>->{key}",
            Communication(session.sender, session.receiver, session.message, continuation),
        )
    if isinstance(session, Establishment):
        key, nested = _canon(session.nested, env, depth)
        return (
            f"<{','.join(session.parties)}:{session.session}>{{{key}}}",
            Establishment(session.parties, session.session, session.body, nested),
        )
    if isinstance(session, SessionRecursion):
        name = f"~t{depth}"
        key, body = _canon(session.body, {**env, session.variable: name}, depth + 1)
        return f"rec {name}.({key})", SessionRecursion(session.variable, body)
    if isinstance(session, Concatenation):
        parts = [_canon(item, env, depth) for item in _flatten(session, Concatenation)]
        return (
            "(" + " ; ".join(key for key, _ in parts) + ")",
            concatenation_of(*[term for _, term in parts]),
        )
    kind = type(session)
    parts = sorted(
        (_canon(item, env, depth) for item in _flatten(session, kind)), key=lambda p: p[0]
    )
    separator = " (+) " if kind is SessionUnion else " (x) "
    rebuild = union_of if kind is SessionUnion else product_of
    return (
        "(" + separator.join(key for key, _ in parts) + ")",
        rebuild(*[term for _, term in parts]),
    )


def canonicalize_session(session: Session) -> CanonicalForm[Session]:
    """セッションの正規形と指紋"""
    key, term = _canon(normalize_session_structure(session), {}, 0)
    return CanonicalForm(term=term, fingerprint=key)
