"""
主型付けの推論

型付け規則を構文主導で下から適用する。チャネル型付けΔは先頭から使うスタックで、
[T-sr]・[T-inv]・[T-acc]は先頭の項目だけに作用する。並行合成と選択では
両オペランドを0の項目で補って揃え、揃え方が複数あれば候補として全て残す（上限付き）。
"""

from typing import Optional, Sequence

from ....shared.exceptions.errors import (
    ArityMismatchError,
    NotTypableError,
    RoleMismatchError,
    TypingError,
    UnboundSessionChannelError,
    VariableSplitError,
)
from ....shared.logging.config import get_logger
from ...congruence.services.congruence import (
    absorbing_congruent,
    fingerprint,
    join,
    recursion_closure,
)
from ...parsing.services.printer import format_process
from ...projection.services.projection import channel_signature, participant_at, role_of
from ...syntax.domain.process import (
    NIL,
    Accept,
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
    Sum,
    Variable,
)
from ...syntax.domain.system import TypeEnvironment
from ...syntax.services.names import actions, free_variables
from ...syntax.services.sessions import sorted_participants
from ..domain.models import ChannelEntry, ChannelTyping, Typing
from .channel_typing import alignments, par_process

logger = get_logger(__name__)

DEFAULT_CANDIDATE_LIMIT = 64


def tuple_registry(
    process: Process, bound: Sequence[tuple[str, ...]] = ()
) -> dict[str, tuple[str, ...]]:
    """
    通信チャネルからそのチャネル組への対応

    外側で束縛された組 bound を先に登録し、続いて招待・受諾の接頭辞が束縛する組を
    初出順に登録する。どの組にも属さない通信チャネルは一つだけの組とする。
    """
    registry: dict[str, tuple[str, ...]] = {}
    for channels in bound:
        for channel in channels:
            registry.setdefault(channel, tuple(channels))
    found = actions(process)
    for action in found:
        if isinstance(action, (Invite, Accept)):
            for channel in action.channels:
                registry.setdefault(channel, action.channels)
    for action in found:
        if isinstance(action, (Send, Receive)):
            registry.setdefault(action.channel, (action.channel,))
    return registry


def _typing_key(typing: Typing) -> tuple:
    return (
        fingerprint(typing.session),
        tuple((e.channels, fingerprint(e.process)) for e in typing.channels.entries),
    )


class _Inferencer:
    """一つのプロセスに対する推論"""

    def __init__(
        self,
        env: TypeEnvironment,
        process: Process,
        limit: int,
        reverse: bool = False,
        bound: Sequence[tuple[str, ...]] = (),
    ) -> None:
        self.env = env
        self.limit = limit
        self.reverse = reverse
        self.registry = tuple_registry(process, bound)
        self.tuples = list(dict.fromkeys(self.registry.values()))
        self.capped = False

    def bounded(self, candidates: list[Typing]) -> list[Typing]:
        unique: dict[tuple, Typing] = {}
        for candidate in candidates:
            unique.setdefault(_typing_key(candidate), candidate)
        result = list(unique.values())
        if len(result) > self.limit:
            self.capped = True
            logger.debug(f"Typing candidates capped at {self.limit}")
            result = result[: self.limit]
        return result

    def infer(
        self, process: Process, variables: frozenset[str], hint: Optional[str] = None
    ) -> list[Typing]:
        errors: list[TypingError] = []
        candidates = self.bounded(self.dispatch(process, variables, hint, errors))
        if not candidates:
            if errors:
                raise errors[0]
            raise NotTypableError(f"No typing rule applies to {format_process(process)}")
        return candidates

    def dispatch(
        self,
        process: Process,
        variables: frozenset[str],
        hint: Optional[str],
        errors: list[TypingError],
    ) -> list[Typing]:
        if isinstance(process, Inaction):
            return [Typing(NIL)]
        if isinstance(process, Variable):
            return self.variable(process, variables, hint, errors)
        if isinstance(process, Labelled):
            return self.infer(process.body, variables, hint)
        if isinstance(process, Prefix):
            if isinstance(process.action, (Send, Receive)):
                return self.communication(process, variables, errors)
            if isinstance(process.action, (Invite, Accept)):
                return self.session_prefix(process, variables, errors)
            errors.append(NotTypableError("Silent prefixes have no typing rule"))
            return []
        if isinstance(process, (Parallel, Sum)):
            return self.combine(process, variables)
        if isinstance(process, Recursion):
            return self.recursion(process, variables, errors)
        assert isinstance(process, Hiding)
        return self.hiding(process, variables, errors)

    # [T-var]
    def variable(
        self,
        process: Variable,
        variables: frozenset[str],
        hint: Optional[str],
        errors: list[TypingError],
    ) -> list[Typing]:
        if process.name not in variables:
            errors.append(NotTypableError(f"Process variable {process.name} is not in scope"))
            return []
        in_session = Typing(process)
        in_channels = [
            Typing(NIL, ChannelTyping((ChannelEntry(t, process),))) for t in self.tuples
        ]
        preferred = self.registry.get(hint) if hint is not None else None
        if preferred is not None:
            first = [c for c in in_channels if c.channels.tuples() == (preferred,)]
            rest = [c for c in in_channels if c.channels.tuples() != (preferred,)]
            return first + [in_session] + rest
        return [in_session] + in_channels

    # [T-sr]（必要なら[T-tml]で先頭に項目を補う）
    def communication(
        self, process: Prefix, variables: frozenset[str], errors: list[TypingError]
    ) -> list[Typing]:
        action = process.action
        assert isinstance(action, (Send, Receive))
        channel = action.channel
        if channel in self.env.channels:
            errors.append(
                NotTypableError(f"Session channel {channel} is used for an ordinary communication")
            )
            return []
        result: list[Typing] = []
        for typing in self.infer(process.continuation, variables, channel):
            delta = typing.channels
            head = delta.head
            if head is not None and channel in head.channels:
                entry = ChannelEntry(head.channels, Prefix(action, head.process))
                result.append(Typing(typing.session, delta.tail.prepend(entry)))
                continue
            labels = self.registry.get(channel, (channel,))
            if set(labels) & delta.channels():
                errors.append(
                    NotTypableError(
                        f"Channel {channel} is used while another channel typing entry is active"
                    )
                )
                continue
            entry = ChannelEntry(labels, Prefix(action, NIL))
            result.append(Typing(typing.session, delta.prepend(entry)))
        return result

    # [T-inv] / [T-acc]
    def session_prefix(
        self, process: Prefix, variables: frozenset[str], errors: list[TypingError]
    ) -> list[Typing]:
        action = process.action
        assert isinstance(action, (Invite, Accept))
        binding = self.env.lookup(action.channel)
        if binding is None:
            raise UnboundSessionChannelError(action.channel)
        participants = sorted_participants(binding.body)
        if isinstance(action, Invite):
            if action.parties != len(participants):
                raise ArityMismatchError(
                    f"{binding.session} has {len(participants)} participants but the invitation "
                    f"on {action.channel} names {action.parties}"
                )
            index = 1
        else:
            if not 2 <= action.index <= len(participants):
                raise ArityMismatchError(
                    f"{binding.session} has no participant number {action.index} to accept "
                    f"on {action.channel}"
                )
            index = action.index
        signature = channel_signature(binding.body, binding.session)
        if len(signature) != len(action.channels):
            raise ArityMismatchError(
                f"Session {binding.session} uses {len(signature)} channels but the prefix on "
                f"{action.channel} binds {len(action.channels)}"
            )
        expected = role_of(
            binding.body, participant_at(binding.body, index), action.channels, binding.session
        )

        result: list[Typing] = []
        for typing in self.infer(process.continuation, variables, action.channel):
            delta = typing.channels
            head = delta.head
            if head is not None and head.channels == action.channels:
                found, rest = head.process, delta.tail
            elif set(action.channels) & delta.channels():
                errors.append(
                    NotTypableError(
                        f"Channels of the session on {action.channel} are not at the head "
                        "of the channel typing"
                    )
                )
                continue
            else:
                found, rest = NIL, delta
            if not absorbing_congruent(found, expected):
                errors.append(
                    RoleMismatchError(
                        action.channel, format_process(expected), format_process(found)
                    )
                )
                continue
            result.append(Typing(Prefix(action, typing.session), rest))
        return result

    # [T-com] / [T-sum]
    def combine(self, process: Parallel | Sum, variables: frozenset[str]) -> list[Typing]:
        left = self.infer(process.left, variables)
        right = self.infer(process.right, variables)
        merge = par_process if isinstance(process, Parallel) else join
        result: list[Typing] = []
        for a in left:
            for b in right:
                for delta_a, delta_b in alignments(a.channels, b.channels, self.reverse):
                    entries = tuple(
                        ChannelEntry(x.channels, merge(x.process, y.process))
                        for x, y in zip(delta_a.entries, delta_b.entries)
                    )
                    result.append(Typing(merge(a.session, b.session), ChannelTyping(entries)))
        return result

    # [T-rec]
    def recursion(
        self, process: Recursion, variables: frozenset[str], errors: list[TypingError]
    ) -> list[Typing]:
        variable = process.variable
        result: list[Typing] = []
        for typing in self.infer(process.body, variables | {variable}):
            positions = [typing.session] + [e.process for e in typing.channels.entries]
            if sum(1 for p in positions if variable in free_variables(p)) > 1:
                continue
            result.append(
                Typing(
                    recursion_closure(typing.session, variable),
                    ChannelTyping(
                        tuple(
                            ChannelEntry(e.channels, recursion_closure(e.process, variable))
                            for e in typing.channels.entries
                        )
                    ),
                )
            )
        if not result:
            errors.append(VariableSplitError(variable))
        return result

    # [T-hid] / [T-vei]
    def hiding(
        self, process: Hiding, variables: frozenset[str], errors: list[TypingError]
    ) -> list[Typing]:
        channel = process.channel
        if channel in self.env.channels:
            errors.append(NotTypableError(f"Session channel {channel} cannot be restricted"))
            return []
        result: list[Typing] = []
        for typing in self.infer(process.body, variables):
            entries = tuple(
                ChannelEntry(tuple(c for c in e.channels if c != channel), e.process)
                for e in typing.channels.entries
            )
            result.append(Typing(typing.session, ChannelTyping(entries)))
        return result


def infer_candidates(
    env: TypeEnvironment,
    process: Process,
    limit: int = DEFAULT_CANDIDATE_LIMIT,
    reverse: bool = False,
    bound: Sequence[tuple[str, ...]] = (),
) -> list[Typing]:
    """
    主型付けの候補を全て求める（上限付き）

    Args:
        env: 型環境Γ
        process: 束縛名が付け替え済みのプロセス
        limit: 各部分項で保持する候補数の上限
        reverse: 揃え方の優先順を逆にする（一意性の検査用）
        bound: 外側の招待・受諾が束縛したチャネル組（開いた部分項の推論用）

    Returns:
        list[Typing]: 決定的な順序の候補

    Raises:
        TypingError: 型付けできない場合（原因ごとのサブクラス）
    """
    inferencer = _Inferencer(env, process, limit, reverse, bound)
    candidates = inferencer.infer(process, env.variables)
    if inferencer.capped:
        logger.warning(f"Typing candidates were capped at {limit}; later candidates were dropped")
    return candidates


def infer_principal(
    env: TypeEnvironment,
    process: Process,
    limit: int = DEFAULT_CANDIDATE_LIMIT,
    reverse: bool = False,
    bound: Sequence[tuple[str, ...]] = (),
) -> Typing:
    """
    主型付け（最初に残った候補）

    bound を与えると、その組の通信チャネルは一つの項目にまとめて型付けする。

    Raises:
        TypingError: 型付けできない場合
    """
    principal = infer_candidates(env, process, limit, reverse, bound)[0]
    logger.debug(
        f"Principal typing of {format_process(process)}: {format_process(principal.session)}"
    )
    return principal


def try_infer(
    env: TypeEnvironment, process: Process, limit: int = DEFAULT_CANDIDATE_LIMIT
) -> Optional[Typing]:
    """型付けできなければNone"""
    try:
        return infer_principal(env, process, limit)
    except TypingError as e:
        logger.debug(f"Not typable: {e}")
        return None
