"""
セッションのロールへの射影

通信セッション B↾r は通信接頭辞の出現ごとの印をチャネルとして使い、
既定では参加者の組ごとのチャネルへ統合する（メッセージフローが決定的な場合のみ）。
統合セッション A↾r は確立の出現をΓの束縛で印付け、招待・受諾の接頭辞を生成する。
"""

from functools import lru_cache
from typing import Optional

from ....shared.exceptions.errors import (
    IllegalSubstitutionError,
    UnboundSessionError,
    ValidationError,
)
from ....shared.logging.config import get_logger
from ...reports.domain.models import Outcome, Verdict
from ...semantics.domain.models import DEFAULT_BUDGET, ExplorationBudget
from ...semantics.services.checks import check_determinism
from ...syntax.domain.process import (
    NIL,
    Accept,
    Invite,
    Parallel,
    Prefix,
    Process,
    Receive,
    Recursion,
    Send,
    Sum,
    Variable,
    parallel,
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
from ...syntax.domain.system import TypeEnvironment
from ...syntax.services.names import (
    FreshNames,
    free_channels,
    instantiate,
    replace_inaction,
)
from ...syntax.services.sessions import (
    is_communicating,
    participants_in_order,
    sorted_participants,
)
from ..domain.models import ChannelSubstitution, MarkedSession, Role

logger = get_logger(__name__)


def _child_paths(session: Session, path: str) -> list[tuple[Session, str]]:
    if isinstance(session, Communication):
        return [(session.continuation, f"{path}.cont")]
    if isinstance(session, Establishment):
        return [(session.nested, f"{path}.nested")]
    if isinstance(session, (Concatenation, SessionUnion, Product)):
        return [(session.left, f"{path}.left"), (session.right, f"{path}.right")]
    if isinstance(session, SessionRecursion):
        return [(session.body, f"{path}.body")]
    return []


def _preorder(session: Session, path: str = "$") -> list[tuple[Session, str]]:
    found = [(session, path)]
    for child, child_path in _child_paths(session, path):
        found.extend(_preorder(child, child_path))
    return found


def recursion_variable(name: str) -> str:
    """t ↦ X_t"""
    return f"X_{name}"


# ---------------------------------------------------------------------------
# 印付け
# ---------------------------------------------------------------------------


def mark_session(
    session: Session, name: str, env: Optional[TypeEnvironment] = None
) -> MarkedSession:
    """
    イベント接頭辞の出現を印付ける

    通信接頭辞は前順でk番目の出現を `{小文字の名前}_{k}` で印付ける。確立の出現は
    本体の名前Nごとに前順でk番目のものをΓでNに束縛されたk番目のチャネルで印付ける
    （束縛が一つなら全ての出現がそのチャネル）。Γがなければ `{小文字のN}_{k}`。

    Args:
        session: 対象セッション
        name: セッションの宣言名
        env: 型環境Γ

    Returns:
        MarkedSession: 印付けされたセッション

    Raises:
        UnboundSessionError: Γが与えられ、確立の出現に対応する束縛がない場合
    """
    marks: dict[str, str] = {}
    establishment_marks: dict[str, str] = {}
    counts: dict[str, int] = {}
    communications = 0
    for node, path in _preorder(session):
        if isinstance(node, Communication):
            communications += 1
            marks[path] = f"{name.lower()}_{communications}"
        elif isinstance(node, Establishment):
            counts[node.session] = counts.get(node.session, 0) + 1
            k = counts[node.session]
            if env is None:
                establishment_marks[path] = f"{node.session.lower()}_{k}"
                continue
            bound = env.channels_for(node.session)
            if len(bound) == 1:
                establishment_marks[path] = bound[0]
            elif k <= len(bound):
                establishment_marks[path] = bound[k - 1]
            else:
                raise UnboundSessionError(node.session)
    return MarkedSession(session, name, marks, establishment_marks)


def marks(spec: Session, env: TypeEnvironment, name: str = "spec") -> list[tuple[str, str]]:
    """「チャネルaがA中のBを印付ける」関係（出現順、重複なし）"""
    marked = mark_session(spec, name, env)
    relation: list[tuple[str, str]] = []
    for node, path in _preorder(spec):
        if isinstance(node, Establishment):
            pair = (marked.establishment_marks[path], node.session)
            if pair not in relation:
                relation.append(pair)
    return relation


# ---------------------------------------------------------------------------
# 通信セッションの射影
# ---------------------------------------------------------------------------


def _project_communicating(
    session: Session, participant: str, marked: MarkedSession, mapping: dict[str, str], path: str
) -> Process:
    if isinstance(session, End):
        return NIL
    if isinstance(session, TypeVariable):
        return Variable(recursion_variable(session.name))
    if isinstance(session, SessionRecursion):
        return Recursion(
            recursion_variable(session.variable),
            _project_communicating(session.body, participant, marked, mapping, f"{path}.body"),
        )
    if isinstance(session, Communication):
        continuation = _project_communicating(
            session.continuation, participant, marked, mapping, f"{path}.cont"
        )
        mark = marked.marks[path]
        channel = mapping.get(mark, mark)
        if participant == session.sender:
            return Prefix(Send(channel, session.message), continuation)
        if participant == session.receiver:
            return Prefix(Receive(channel, session.message), continuation)
        return continuation
    if isinstance(session, (SessionUnion, Product, Concatenation)):
        left = _project_communicating(session.left, participant, marked, mapping, f"{path}.left")
        right = _project_communicating(
            session.right, participant, marked, mapping, f"{path}.right"
        )
        if isinstance(session, SessionUnion):
            return Sum(left, right)
        if isinstance(session, Product):
            return Parallel(left, right)
        return replace_inaction(left, right)
    raise ValidationError(f"Communicating session {marked.name} contains an establishment")


def _pairwise_mapping(marked: MarkedSession) -> tuple[dict[str, str], tuple[str, ...]]:
    index = {p: i + 1 for i, p in enumerate(sorted_participants(marked.session))}
    mapping: dict[str, str] = {}
    pairs: set[tuple[int, int]] = set()
    for node, path in _preorder(marked.session):
        if isinstance(node, Communication):
            i, j = sorted((index[node.sender], index[node.receiver]))
            pairs.add((i, j))
            mapping[marked.marks[path]] = f"{marked.name.lower()}_{i}_{j}"
    signature = tuple(f"{marked.name.lower()}_{i}_{j}" for i, j in sorted(pairs))
    return mapping, signature


def identity_substitution(marked: MarkedSession) -> ChannelSubstitution:
    """印をそのままチャネルとして使う置換（シグネチャは前順の印）"""
    signature = tuple(
        marked.marks[path] for _, path in _preorder(marked.session) if path in marked.marks
    )
    return ChannelSubstitution({}, signature, pairwise=False)


def roles_in_parallel(marked: MarkedSession, substitution: ChannelSubstitution) -> Process:
    """全参加者のロールの並行合成"""
    return parallel(
        *[
            _project_communicating(marked.session, r, marked, substitution.mapping, "$")
            for r in sorted_participants(marked.session)
        ]
    )


def validate_substitution(
    marked: MarkedSession,
    substitution: ChannelSubstitution,
    budget: ExplorationBudget = DEFAULT_BUDGET,
) -> Verdict:
    """
    チャネル置換の合法性（置換後のロールの間のメッセージフローが決定的か）

    τの発生元（チャネル・メッセージ）ごとに決定性を判定する。
    """
    return check_determinism(
        roles_in_parallel(marked, substitution), budget, by_cause=True, silent_only=True
    )


def default_pairwise_substitution(
    session: Session,
    marked: MarkedSession,
    budget: ExplorationBudget = DEFAULT_BUDGET,
) -> ChannelSubstitution:
    """
    参加者の組 {i,j} の印を全て `{小文字の名前}_{i}_{j}` に統合する置換

    合法でなければ恒等置換に戻す。予算内で判定できない場合は統合を採用する。
    """
    mapping, signature = _pairwise_mapping(marked)
    pairwise = ChannelSubstitution(mapping, signature, pairwise=True)
    verdict = validate_substitution(marked, pairwise, budget)
    if verdict.outcome == Outcome.FAIL:
        logger.warning(
            f"Pairwise channels for {marked.name} break message-flow determinism "
            f"({' '.join(verdict.trace)}); using one channel per prefix"
        )
        return identity_substitution(marked)
    if verdict.outcome == Outcome.UNKNOWN:
        logger.info(f"Pairwise channels for {marked.name} accepted within budget")
    return pairwise


@lru_cache(maxsize=256)
def _plan(
    session: Session, name: str, budget: ExplorationBudget
) -> tuple[MarkedSession, ChannelSubstitution]:
    marked = mark_session(session, name)
    return marked, default_pairwise_substitution(session, marked, budget)


def channel_signature(
    session: Session, name: str, budget: ExplorationBudget = DEFAULT_BUDGET
) -> tuple[str, ...]:
    """既定の置換を適用した後のロールのチャネル組"""
    return _plan(session, name, budget)[1].signature


def project_communicating(
    session: Session,
    participant: str,
    name: str,
    substitution: Optional[ChannelSubstitution] = None,
    budget: ExplorationBudget = DEFAULT_BUDGET,
) -> Role:
    """
    B↾r

    Args:
        session: 整形式で競合のない通信セッション
        participant: 参加者名
        name: セッションの宣言名（チャネル名の接頭辞）
        substitution: チャネル置換（省略時は既定の組ごとの置換）
        budget: 合法性の検査に使う探索予算

    Returns:
        Role: ロール

    Raises:
        IllegalSubstitutionError: 与えられた置換がメッセージフローの決定性を壊す場合
    """
    marked, default = _plan(session, name, budget)
    if substitution is None:
        substitution = default
    elif substitution.mapping:
        verdict = validate_substitution(marked, substitution, budget)
        if verdict.outcome == Outcome.FAIL:
            raise IllegalSubstitutionError(
                f"Channel substitution for {name} is not legal: {verdict.message}", verdict.trace
            )
    process = _project_communicating(session, participant, marked, substitution.mapping, "$")
    return Role(process, participant, name, substitution.signature)


def participant_at(session: Session, index: int) -> str:
    """k番目（1始まり）の参加者"""
    participants = sorted_participants(session)
    if not 1 <= index <= len(participants):
        raise ValidationError(f"Session has no participant number {index}")
    return participants[index - 1]


def role_of(
    session: Session,
    participant: str,
    channels: tuple[str, ...],
    name: str,
    budget: ExplorationBudget = DEFAULT_BUDGET,
) -> Process:
    """
    B↾r⟨c̃⟩

    Raises:
        ValueError: チャネル組の長さがシグネチャと一致しない場合
    """
    role = project_communicating(session, participant, name, budget=budget)
    return instantiate(role.process, role.signature, channels)


# ---------------------------------------------------------------------------
# 統合セッションの射影
# ---------------------------------------------------------------------------


def _project_integrating(
    session: Session,
    participant: str,
    marked: MarkedSession,
    env: TypeEnvironment,
    budget: ExplorationBudget,
    path: str,
) -> Process:
    if isinstance(session, End):
        return NIL
    if isinstance(session, TypeVariable):
        return Variable(recursion_variable(session.name))
    if isinstance(session, SessionRecursion):
        return Recursion(
            recursion_variable(session.variable),
            _project_integrating(session.body, participant, marked, env, budget, f"{path}.body"),
        )
    if isinstance(session, Establishment):
        continuation = _project_integrating(
            session.nested, participant, marked, env, budget, f"{path}.nested"
        )
        if participant not in session.parties:
            return continuation
        channel = marked.establishment_marks[path]
        binding = env.lookup(channel)
        if binding is None:
            raise UnboundSessionError(session.session)
        signature = channel_signature(binding.body, binding.session, budget)
        clashes = set(signature) & free_channels(continuation)
        if clashes:
            fresh = FreshNames(set(signature) | free_channels(continuation))
            renaming = {c: fresh.fresh(c) for c in clashes}
            signature = tuple(renaming.get(c, c) for c in signature)
        position = session.parties.index(participant)
        if position == 0:
            action = Invite(channel, len(session.parties), signature)
        else:
            action = Accept(channel, position + 1, signature)
        return Prefix(action, continuation)
    if isinstance(session, (SessionUnion, Product, Concatenation)):
        left = _project_integrating(session.left, participant, marked, env, budget, f"{path}.left")
        right = _project_integrating(
            session.right, participant, marked, env, budget, f"{path}.right"
        )
        if isinstance(session, SessionUnion):
            return Sum(left, right)
        if isinstance(session, Product):
            return Parallel(left, right)
        return replace_inaction(left, right)
    # 開始済みの通信セッションの通信は統合セッションの段階では現れない
    assert isinstance(session, Communication)
    return _project_integrating(
        session.continuation, participant, marked, env, budget, f"{path}.cont"
    )


def project_integrating(
    session: Session,
    participant: str,
    env: TypeEnvironment,
    name: str = "spec",
    budget: ExplorationBudget = DEFAULT_BUDGET,
) -> Role:
    """
    A↾r

    Args:
        session: 整形式で競合のない統合セッション
        participant: 参加者名
        env: 確立の本体を束縛する型環境Γ
        name: セッションの宣言名
        budget: 本体の射影に使う探索予算

    Returns:
        Role: ロール

    Raises:
        UnboundSessionError: 確立の本体がΓで束縛されていない場合
    """
    marked = mark_session(session, name, env)
    process = _project_integrating(session, participant, marked, env, budget, "$")
    logger.debug(f"Projected {name} onto {participant}")
    return Role(process, participant, name)


def project(
    session: Session,
    participant: str,
    env: Optional[TypeEnvironment] = None,
    name: str = "spec",
    budget: ExplorationBudget = DEFAULT_BUDGET,
) -> Role:
    """セッションの種類に応じて射影する"""
    if is_communicating(session):
        return project_communicating(session, participant, name, budget=budget)
    return project_integrating(session, participant, env or TypeEnvironment(), name, budget)


def project_all(
    session: Session,
    env: Optional[TypeEnvironment] = None,
    name: str = "spec",
    budget: ExplorationBudget = DEFAULT_BUDGET,
) -> dict[str, Role]:
    """全参加者のロール（初出順）"""
    return {
        participant: project(session, participant, env, name, budget)
        for participant in participants_in_order(session)
    }
