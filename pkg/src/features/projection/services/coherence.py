"""射影と遷移の整合性の検査"""

from ....shared.logging.config import get_logger
from ...congruence.services.congruence import normalize_session, session_fingerprint
from ...reports.domain.models import Verdict
from ...semantics.domain.models import (
    DEFAULT_BUDGET,
    EstablishLabel,
    ExplorationBudget,
    SessionLabel,
)
from ...semantics.services.correspondence import cause_translator, check_correspondence
from ...syntax.domain.process import Labelled, parallel
from ...syntax.domain.session import (
    Concatenation,
    Establishment,
    Product,
    Session,
    SessionRecursion,
    SessionUnion,
)
from ...syntax.domain.system import TypeEnvironment
from ...syntax.services.sessions import sorted_participants, substitute_type_variable
from .projection import project_communicating, project_integrating

logger = get_logger(__name__)


def check_projection_coherence(
    session: Session, name: str, budget: ExplorationBudget = DEFAULT_BUDGET
) -> Verdict:
    """
    通信セッションの遷移とロールの通信が対応するかの検査

    B →(p,q:v) B′ ならば B↾p の送信と B↾q の受信が同じチャネルで同期し、
    逆にロールの同期は全てBの遷移に対応する。ロールは参加者名でラベル付けして並行合成する。
    """
    roles = parallel(
        *[
            Labelled(r, project_communicating(session, r, name, budget=budget).process)
            for r in sorted_participants(session)
        ]
    )
    verdict = check_correspondence(
        roles,
        session,
        cause_translator(),
        "projection-coherence",
        budget,
        both_directions=True,
    )
    logger.debug(f"Projection coherence of {name}: {verdict.outcome.value}")
    return verdict


def _establishment_moves(
    session: Session,
    unfolds: int,
    state: dict[str, bool],
    unfolding: frozenset[str] = frozenset(),
) -> list[tuple[SessionLabel, Session]]:
    """統合セッションの段階の遷移: 確立 <p̃:B>{A} は A に進む"""
    if isinstance(session, Establishment):
        return [(EstablishLabel(session.parties, session.session), session.nested)]
    if isinstance(session, Product):
        return [
            (label, Product(target, session.right))
            for label, target in _establishment_moves(session.left, unfolds, state)
        ] + [
            (label, Product(session.left, target))
            for label, target in _establishment_moves(session.right, unfolds, state)
        ]
    if isinstance(session, SessionUnion):
        return _establishment_moves(
            session.left, unfolds, state, unfolding
        ) + _establishment_moves(session.right, unfolds, state, unfolding)
    if isinstance(session, Concatenation):
        return [
            (label, Concatenation(target, session.right))
            for label, target in _establishment_moves(session.left, unfolds, state)
        ]
    if isinstance(session, SessionRecursion):
        key = session_fingerprint(session)
        if key in unfolding:
            return []
        if unfolds <= 0:
            state["truncated"] = True
            return []
        unfolded = substitute_type_variable(session.body, session.variable, session)
        return _establishment_moves(
            normalize_session(unfolded), unfolds - 1, state, unfolding | {key}
        )
    return []


def check_establishment_coherence(
    session: Session,
    env: TypeEnvironment,
    name: str = "spec",
    budget: ExplorationBudget = DEFAULT_BUDGET,
) -> Verdict:
    """
    統合セッションの確立とロールの招待・受諾が対応するかの検査

    A →(p̃:B) A′ ⊗ B⟨p̃⟩ となるのは、p̃のロールが印のチャネルで招待と全ての受諾を
    提供する場合に限る。開始された通信セッションの中身は比較しない。
    """
    roles = parallel(
        *[
            Labelled(r, project_integrating(session, r, env, name, budget).process)
            for r in sorted_participants(session)
        ]
    )

    def successors(state: Session) -> tuple[list[tuple[SessionLabel, Session]], bool]:
        flags = {"truncated": False}
        moves = _establishment_moves(normalize_session(state), budget.max_rec_unfold, flags)
        return [(label, normalize_session(t)) for label, t in moves], flags["truncated"]

    verdict = check_correspondence(
        roles,
        session,
        cause_translator(env),
        "establishment-coherence",
        budget,
        both_directions=True,
        session_successors=successors,
    )
    logger.debug(f"Establishment coherence of {name}: {verdict.outcome.value}")
    return verdict
