"""チャネル型付けの演算のテスト"""

import pytest

from src.features.syntax.domain.process import NIL, Inaction, Parallel, Prefix, Send, Sum
from src.features.typesystem.domain.models import ChannelEntry, ChannelTyping
from src.features.typesystem.services.channel_typing import (
    alignments,
    compatible,
    join_typing,
    par_process,
    par_typing,
    typing_congruent,
)

P = Prefix(Send("a", "v"), NIL)
Q = Prefix(Send("b", "w"), NIL)


def typing(*entries: tuple[tuple[str, ...], object]) -> ChannelTyping:
    built = (ChannelEntry(channels, process) for channels, process in entries)
    return ChannelTyping(tuple(built))  # type: ignore[arg-type]


def test_labels_must_be_disjoint() -> None:
    """ラベルのチャネル組は互いに素"""
    with pytest.raises(ValueError):
        typing((("a",), P), (("a", "b"), Q))


def test_head_and_tail() -> None:
    """先頭と残り"""
    delta = typing((("a",), P), (("b",), Q))
    assert delta.head == ChannelEntry(("a",), P)
    assert delta.tail.tuples() == (("b",),)
    assert delta.channels() == {"a", "b"}
    assert delta.ceil() == Parallel(P, Q)


def test_par_process_drops_inaction() -> None:
    """一方が0ならもう一方"""
    assert par_process(NIL, P) == P
    assert par_process(P, NIL) == P
    assert par_process(P, Q) == Parallel(P, Q)


def test_pointwise_operations() -> None:
    """互換なチャネル型付けの各位置を合成する"""
    left = typing((("a",), P))
    right = typing((("a",), Q))
    assert compatible(left, right)
    assert par_typing(left, right).entries[0].process == Parallel(P, Q)
    assert join_typing(left, right).entries[0].process == Sum(P, Q)
    assert typing_congruent(par_typing(left, right), par_typing(right, left))
    with pytest.raises(ValueError):
        join_typing(left, typing((("b",), Q)))


def test_alignments_pad_with_inaction() -> None:
    """0の項目で補って揃える"""
    left = typing((("a",), P))
    right = typing((("b",), Q))
    forward = [(x.tuples(), y.tuples()) for x, y in alignments(left, right)]
    assert forward == [
        ((("b",), ("a",)), (("b",), ("a",))),
        ((("a",), ("b",)), (("a",), ("b",))),
    ]
    backward = [x.tuples() for x, _ in alignments(left, right, reverse=True)]
    assert backward[0] == (("a",), ("b",))
    first_left, first_right = next(alignments(left, right))
    assert isinstance(first_left.entries[0].process, Inaction)
    assert first_right.entries[0].process == Q


def test_alignments_require_matching_overlap() -> None:
    """重なる位置のラベルは一致しなければならない"""
    left = typing((("a",), P))
    right = typing((("a",), Q))
    assert [x.tuples() for x, _ in alignments(left, right)] == [(("a",),)]
