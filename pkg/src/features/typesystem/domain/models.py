"""型付けのドメインモデル"""

from dataclasses import dataclass

from ...syntax.domain.process import Process, parallel


@dataclass(frozen=True)
class ChannelEntry:
    """チャネル型付けの一項目 c̃:Q"""

    channels: tuple[str, ...]  # ラベルのチャネル組（[T-hid]で縮むことがある）
    process: Process


@dataclass(frozen=True)
class ChannelTyping:
    """
    チャネル型付け Δ

    順序を持つ列で、先頭が[T-sr]・[T-inv]・[T-acc]の対象になる。
    ラベルのチャネル組は互いに素。
    """

    entries: tuple[ChannelEntry, ...] = ()

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for entry in self.entries:
            if seen & set(entry.channels):
                raise ValueError("Labelling tuples of a channel typing must be disjoint")
            seen |= set(entry.channels)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def head(self) -> ChannelEntry | None:
        return self.entries[0] if self.entries else None

    @property
    def tail(self) -> "ChannelTyping":
        return ChannelTyping(self.entries[1:])

    def channels(self) -> frozenset[str]:
        """ch(Δ)"""
        return frozenset(c for entry in self.entries for c in entry.channels)

    def tuples(self) -> tuple[tuple[str, ...], ...]:
        return tuple(entry.channels for entry in self.entries)

    def prepend(self, entry: ChannelEntry) -> "ChannelTyping":
        return ChannelTyping((entry,) + self.entries)

    def ceil(self) -> Process:
        """⌈Δ⌉ = Q1 ∥ ... ∥ Qn"""
        return parallel(*[entry.process for entry in self.entries])


EMPTY_TYPING = ChannelTyping()


@dataclass(frozen=True)
class Typing:
    """型付け R∘Δ"""

    session: Process  # セッション型付けR
    channels: ChannelTyping = EMPTY_TYPING
