"""
プロセスとセッションの一歩遷移

プロセスの遷移は項の構造に沿って導出する。並行合成では各成分の遷移に加えて、
送受信の同期（τ）とセッション確立（招待と全ての受諾の同期、τ）を求める。
"""

from dataclasses import dataclass, replace
from itertools import product
from typing import Optional

from ....shared.logging.config import get_logger
from ...congruence.services.congruence import fingerprint, normalize_session, session_fingerprint
from ...syntax.domain.process import (
    Accept,
    Action,
    Hiding,
    Inaction,
    InteractionCause,
    Invite,
    Labelled,
    Prefix,
    Process,
    Receive,
    Recursion,
    Send,
    Silent,
    Sum,
    Variable,
    hide,
    parallel,
    parallel_components,
    sum_components,
)
from ...syntax.domain.session import (
    Communication,
    Concatenation,
    Establishment,
    Product,
    Session,
    SessionRecursion,
    SessionUnion,
)
from ...syntax.services.names import (
    FreshNames,
    all_names,
    substitute,
    substitute_process_variable,
)
from ...syntax.services.sessions import rename_participants, substitute_type_variable
from ..domain.models import (
    DEFAULT_BUDGET,
    CommLabel,
    EstablishLabel,
    ExplorationBudget,
    ProcessTransitions,
    SessionLabel,
    SessionTransitions,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class _Move:
    """成分の一歩（ownerは遷移したコンポーネントのラベル）"""

    action: Action
    target: Process
    owner: Optional[str] = None


class _Deriver:
    def __init__(self, root: Process, budget: ExplorationBudget) -> None:
        self.budget = budget
        self.fresh = FreshNames(all_names(root))
        self.truncated = False

    def moves(
        self, process: Process, unfolds: int, unfolding: frozenset[str] = frozenset()
    ) -> list[_Move]:
        """
        一歩の導出

        unfolding は選択の枝だけを通って到達した、展開中の再帰項の指紋。
        同じ再帰項が選択の枝に再び現れても新しい遷移は生じないので、そこで止める。
        """
        if isinstance(process, (Inaction, Variable)):
            return []
        if isinstance(process, Prefix):
            return [_Move(process.action, process.continuation)]
        if isinstance(process, Sum):
            return [
                m for s in sum_components(process) for m in self.moves(s, unfolds, unfolding)
            ]
        if isinstance(process, Recursion):
            key = fingerprint(process)
            if key in unfolding:
                return []
            if unfolds <= 0:
                self.truncated = True
                return []
            unfolded = substitute_process_variable(process.body, process.variable, process)
            return self.moves(unfolded, unfolds - 1, unfolding | {key})
        if isinstance(process, Labelled):
            return [
                _Move(
                    _with_owner(m.action, process.label),
                    Labelled(process.label, m.target),
                    m.owner or process.label,
                )
                for m in self.moves(process.body, unfolds)
            ]
        if isinstance(process, Hiding):
            # [Hid]: 隠蔽されたチャネルを主語とする可視遷移は外に出ない
            return [
                replace(m, target=Hiding(process.channel, m.target))
                for m in self.moves(process.body, unfolds)
                if isinstance(m.action, Silent) or m.action.channel != process.channel
            ]
        return self.parallel_moves(parallel_components(process), unfolds)

    def parallel_moves(self, components: list[Process], unfolds: int) -> list[_Move]:
        per_component = [self.moves(c, unfolds) for c in components]
        result: list[_Move] = []

        def rebuild(replacements: dict[int, Process]) -> Process:
            return parallel(*[replacements.get(i, c) for i, c in enumerate(components)])

        # [Par]
        for i, moves in enumerate(per_component):
            for move in moves:
                result.append(_Move(move.action, rebuild({i: move.target}), move.owner))

        # [Com]
        for i, sender_moves in enumerate(per_component):
            for sender in sender_moves:
                if not isinstance(sender.action, Send):
                    continue
                for j, receiver_moves in enumerate(per_component):
                    if i == j:
                        continue
                    for receiver in receiver_moves:
                        if (
                            isinstance(receiver.action, Receive)
                            and receiver.action.channel == sender.action.channel
                            and receiver.action.message == sender.action.message
                        ):
                            cause = InteractionCause(
                                "com",
                                sender.action.channel,
                                sender.action.message,
                                (sender.owner, receiver.owner),
                            )
                            result.append(
                                _Move(
                                    Silent(cause),
                                    rebuild({i: sender.target, j: receiver.target}),
                                )
                            )

        # [Sess]
        for i, inviter_moves in enumerate(per_component):
            for inviter in inviter_moves:
                if isinstance(inviter.action, Invite):
                    result.extend(self.establish(components, per_component, i, inviter))
        return result

    def establish(
        self,
        components: list[Process],
        per_component: list[list[_Move]],
        inviter_index: int,
        inviter: _Move,
    ) -> list[_Move]:
        invite = inviter.action
        assert isinstance(invite, Invite)
        width = len(invite.channels)
        # 参加者番号ごとの受諾候補
        candidates: list[list[tuple[int, _Move]]] = []
        for k in range(2, invite.parties + 1):
            options = [
                (j, move)
                for j, moves in enumerate(per_component)
                if j != inviter_index
                for move in moves
                if isinstance(move.action, Accept)
                and move.action.channel == invite.channel
                and move.action.index == k
                and len(move.action.channels) == width
            ]
            if not options:
                return []
            candidates.append(options)

        result: list[_Move] = []
        for choice in product(*candidates):
            used = [j for j, _ in choice]
            if len(set(used)) != len(used):
                continue
            fresh_channels = tuple(self.fresh.fresh(c) for c in invite.channels)
            replacements: dict[int, Process] = {
                inviter_index: substitute(
                    inviter.target, dict(zip(invite.channels, fresh_channels)), avoid_capture=True
                )
            }
            for j, move in choice:
                accept = move.action
                assert isinstance(accept, Accept)
                replacements[j] = substitute(
                    move.target, dict(zip(accept.channels, fresh_channels)), avoid_capture=True
                )
            order = [inviter_index] + used
            session_part = hide(fresh_channels, parallel(*[replacements[j] for j in order]))
            rest = [c for idx, c in enumerate(components) if idx not in replacements]
            cause = InteractionCause(
                "sess",
                invite.channel,
                None,
                tuple([inviter.owner] + [move.owner for _, move in choice]),
            )
            result.append(_Move(Silent(cause), parallel(session_part, *rest)))
        return result


def _with_owner(action: Action, label: str) -> Action:
    """ラベルの内側で起きたτの関与者を補う"""
    if isinstance(action, Silent) and action.cause is not None:
        parties = tuple(p if p is not None else label for p in action.cause.parties)
        return Silent(replace(action.cause, parties=parties))
    return action


def _label_key(action: Action) -> tuple:
    if isinstance(action, Silent):
        cause = action.cause
        if cause is None:
            return ("tau",)
        return ("tau", cause.kind, cause.channel, cause.message, cause.parties)
    return (action,)


def proc_transitions(
    process: Process, budget: ExplorationBudget = DEFAULT_BUDGET
) -> ProcessTransitions:
    """
    一歩遷移を全て求める

    Args:
        process: 束縛名が付け替え済みのプロセス
        budget: 一つの導出で許す再帰展開の回数を与える予算

    Returns:
        ProcessTransitions: (ラベル, 遷移先) の一覧。導出が予算で打ち切られたらtruncated
    """
    deriver = _Deriver(process, budget)
    moves = deriver.moves(process, budget.max_rec_unfold)
    seen: set[tuple] = set()
    result = ProcessTransitions(truncated=deriver.truncated)
    for move in moves:
        key = (_label_key(move.action), fingerprint(move.target))
        if key in seen:
            continue
        seen.add(key)
        result.transitions.append((move.action, move.target))
    if deriver.truncated:
        logger.debug(f"Recursion unfolding budget reached ({budget.max_rec_unfold})")
    return result


# ---------------------------------------------------------------------------
# セッション
# ---------------------------------------------------------------------------


def _session_moves(
    session: Session,
    unfolds: int,
    state: dict[str, bool],
    unfolding: frozenset[str] = frozenset(),
) -> list[tuple[SessionLabel, Session]]:
    if isinstance(session, Communication):
        return [
            (CommLabel(session.sender, session.receiver, session.message), session.continuation)
        ]
    if isinstance(session, Establishment):
        started = rename_participants(session.body, session.parties)
        return [
            (EstablishLabel(session.parties, session.session), Product(session.nested, started))
        ]
    if isinstance(session, Product):
        left_moves = [
            (label, Product(target, session.right))
            for label, target in _session_moves(session.left, unfolds, state)
        ]
        right_moves = [
            (label, Product(session.left, target))
            for label, target in _session_moves(session.right, unfolds, state)
        ]
        return left_moves + right_moves
    if isinstance(session, SessionUnion):
        return _session_moves(session.left, unfolds, state, unfolding) + _session_moves(
            session.right, unfolds, state, unfolding
        )
    if isinstance(session, Concatenation):
        return [
            (label, Concatenation(target, session.right))
            for label, target in _session_moves(session.left, unfolds, state)
        ]
    if isinstance(session, SessionRecursion):
        # 合併の枝に同じ再帰が再び現れても新しい遷移はない
        key = session_fingerprint(session)
        if key in unfolding:
            return []
        if unfolds <= 0:
            state["truncated"] = True
            return []
        unfolded = substitute_type_variable(session.body, session.variable, session)
        return _session_moves(normalize_session(unfolded), unfolds - 1, state, unfolding | {key})
    return []


def session_transitions(
    session: Session, budget: ExplorationBudget = DEFAULT_BUDGET
) -> SessionTransitions:
    """
    セッションの一歩遷移を全て求める

    確立 <p̃:B>{A} は A ⊗ B⟨p̃⟩ に遷移する。連接の左がendになった時点で右が動ける。
    """
    state = {"truncated": False}
    moves = _session_moves(normalize_session(session), budget.max_rec_unfold, state)
    result = SessionTransitions(truncated=state["truncated"])
    seen: set[tuple] = set()
    for label, target in moves:
        key = (label, session_fingerprint(target))
        if key in seen:
            continue
        seen.add(key)
        result.transitions.append((label, target))
    return result
