"""チャネル型付けの演算"""

from typing import Callable, Iterator, Optional

from ...congruence.services.congruence import join, proc_congruent
from ...syntax.domain.process import Inaction, Parallel, Process
from ..domain.models import ChannelEntry, ChannelTyping


def ceil(typing: ChannelTyping) -> Process:
    """⌈Δ⌉"""
    return typing.ceil()


def channels(typing: ChannelTyping) -> frozenset[str]:
    """ch(Δ)"""
    return typing.channels()


def compatible(left: ChannelTyping, right: ChannelTyping) -> bool:
    """Δ ≍ Δ′: 長さが等しく、各位置のラベルのチャネル組が一致する"""
    return left.tuples() == right.tuples()


def par_process(p: Process, q: Process) -> Process:
    """P ∥ Q（一方が0ならもう一方）"""
    if isinstance(p, Inaction):
        return q
    if isinstance(q, Inaction):
        return p
    return Parallel(p, q)


def _pointwise(
    left: ChannelTyping, right: ChannelTyping, combine: Callable[[Process, Process], Process]
) -> ChannelTyping:
    if not compatible(left, right):
        raise ValueError("Channel typings are not compatible")
    return ChannelTyping(
        tuple(
            ChannelEntry(a.channels, combine(a.process, b.process))
            for a, b in zip(left.entries, right.entries)
        )
    )


def par_typing(left: ChannelTyping, right: ChannelTyping) -> ChannelTyping:
    """
    Δ ∥ Δ′

    Raises:
        ValueError: Δ ≍ Δ′ でない場合
    """
    return _pointwise(left, right, par_process)


def join_typing(left: ChannelTyping, right: ChannelTyping) -> ChannelTyping:
    """
    Δ ⊔ Δ′

    Raises:
        ValueError: Δ ≍ Δ′ でない場合
    """
    return _pointwise(left, right, join)


def typing_congruent(left: ChannelTyping, right: ChannelTyping) -> bool:
    """Δ ≡ Δ′: 各位置のプロセスが構造合同"""
    return compatible(left, right) and all(
        proc_congruent(a.process, b.process) for a, b in zip(left.entries, right.entries)
    )


def alignments(
    left: ChannelTyping, right: ChannelTyping, reverse: bool = False
) -> Iterator[tuple[ChannelTyping, ChannelTyping]]:
    """
    [T-tml]と[T-tmr]で0の項目を前後に補い、互換にした組を列挙する

    各オペランドの項目は連続したまま共通の列に置かれる。重なる位置はラベルが一致し、
    全てのラベルは互いに素でなければならない。
    """
    m, n = len(left), len(right)
    offsets = range(-n, m + 1)
    seen: set[tuple[tuple[str, ...], ...]] = set()
    for offset in reversed(offsets) if reverse else offsets:
        start = min(0, offset)
        end = max(m, offset + n)
        slots: list[tuple[Optional[ChannelEntry], Optional[ChannelEntry]]] = []
        valid = True
        for position in range(start, end):
            a = left.entries[position] if 0 <= position < m else None
            b = right.entries[position - offset] if 0 <= position - offset < n else None
            if a is not None and b is not None and a.channels != b.channels:
                valid = False
                break
            slots.append((a, b))
        if not valid:
            continue
        labels = tuple((a or b).channels for a, b in slots)  # type: ignore[union-attr]
        flat = [c for label in labels for c in label]
        if len(flat) != len(set(flat)) or labels in seen:
            continue
        seen.add(labels)
        yield (
            ChannelTyping(
                tuple(a or ChannelEntry(label, Inaction()) for (a, _), label in zip(slots, labels))
            ),
            ChannelTyping(
                tuple(b or ChannelEntry(label, Inaction()) for (_, b), label in zip(slots, labels))
            ),
        )
