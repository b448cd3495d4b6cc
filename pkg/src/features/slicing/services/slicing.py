"""
プロセスのスライス

主スライスはセッションアクション（招待・受諾）だけを、チャネル組のスライスは
主語チャネルが組に含まれる接頭辞だけを残す。プロセス変数は直近の接頭辞が
残るスライスにだけ現れ、他のスライスでは0になる。
"""

from typing import Callable

from ....shared.exceptions.errors import UnsupportedOperatorError
from ...congruence.services.congruence import normalize
from ...syntax.domain.process import (
    NIL,
    Action,
    Hiding,
    Inaction,
    Labelled,
    Parallel,
    Prefix,
    Process,
    Recursion,
    Sum,
    Variable,
    is_session_action,
    subject_channel,
)

Keep = Callable[[Action], bool]


def _slice(process: Process, keep: Keep, variables_kept: bool) -> Process:
    if isinstance(process, Inaction):
        return NIL
    if isinstance(process, Variable):
        return process if variables_kept else NIL
    if isinstance(process, Prefix):
        kept = keep(process.action)
        continuation = _slice(process.continuation, keep, kept)
        return Prefix(process.action, continuation) if kept else continuation
    if isinstance(process, Parallel):
        return Parallel(
            _slice(process.left, keep, variables_kept), _slice(process.right, keep, variables_kept)
        )
    if isinstance(process, Sum):
        return Sum(
            _slice(process.left, keep, variables_kept), _slice(process.right, keep, variables_kept)
        )
    if isinstance(process, Recursion):
        return Recursion(process.variable, _slice(process.body, keep, variables_kept))
    if isinstance(process, Hiding):
        raise UnsupportedOperatorError("hiding")
    assert isinstance(process, Labelled)
    raise UnsupportedOperatorError("labelling")


def main_slice(process: Process) -> Process:
    """
    主スライス P^χM

    Raises:
        UnsupportedOperatorError: 隠蔽またはラベルを含む場合
    """
    return normalize(_slice(process, is_session_action, True))


def channel_slice(process: Process, channels: tuple[str, ...]) -> Process:
    """
    チャネル組のスライス P^χc̃

    Raises:
        UnsupportedOperatorError: 隠蔽またはラベルを含む場合
    """
    members = set(channels)
    return normalize(_slice(process, lambda action: subject_channel(action) in members, False))
