"""名前の扱い（自由チャネル・置換・束縛名の付け替え）"""

from dataclasses import replace
from typing import Iterable, Mapping, Optional

from ....shared.exceptions.errors import CaptureRiskError
from ..domain.process import (
    Accept,
    Action,
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
    Silent,
    Sum,
    Variable,
)

FRESH_SEPARATOR = "#"


def base_name(name: str) -> str:
    """付け替え用の接尾辞（#n）を除いた元の名前"""
    return name.split(FRESH_SEPARATOR, 1)[0]


class FreshNames:
    """
    決定的な新名生成器

    元の名前ごとにカウンタを持ち、name#1, name#2, ... を順に払い出す。
    """

    def __init__(self, avoid: Iterable[str] = ()) -> None:
        self.avoid: set[str] = set(avoid)
        self.counters: dict[str, int] = {}

    def fresh(self, name: str) -> str:
        base = base_name(name)
        counter = self.counters.get(base, 0)
        while True:
            counter += 1
            candidate = f"{base}{FRESH_SEPARATOR}{counter}"
            if candidate not in self.avoid:
                break
        self.counters[base] = counter
        self.avoid.add(candidate)
        return candidate


# ---------------------------------------------------------------------------
# 自由名・束縛名
# ---------------------------------------------------------------------------


def action_binders(action: Action) -> tuple[str, ...]:
    """アクションが継続部で束縛するチャネル"""
    if isinstance(action, (Invite, Accept)):
        return action.channels
    return ()


def action_channel(action: Action) -> Optional[str]:
    """アクションの主語チャネル"""
    if isinstance(action, Silent):
        return None
    return action.channel


def free_channels(process: Process) -> frozenset[str]:
    """fc(P)"""
    if isinstance(process, (Inaction, Variable)):
        return frozenset()
    if isinstance(process, Prefix):
        inner = free_channels(process.continuation) - set(action_binders(process.action))
        subject = action_channel(process.action)
        return inner | {subject} if subject is not None else inner
    if isinstance(process, Hiding):
        return free_channels(process.body) - {process.channel}
    if isinstance(process, (Parallel, Sum)):
        return free_channels(process.left) | free_channels(process.right)
    return free_channels(process.body)


def free_variables(process: Process) -> frozenset[str]:
    """fv(P)"""
    if isinstance(process, Inaction):
        return frozenset()
    if isinstance(process, Variable):
        return frozenset({process.name})
    if isinstance(process, Recursion):
        return free_variables(process.body) - {process.variable}
    if isinstance(process, Prefix):
        return free_variables(process.continuation)
    if isinstance(process, (Parallel, Sum)):
        return free_variables(process.left) | free_variables(process.right)
    return free_variables(process.body)


def all_names(process: Process) -> set[str]:
    """プロセスに現れる全ての名前（チャネル・変数・ラベル）"""
    names: set[str] = set()
    stack: list[Process] = [process]
    while stack:
        node = stack.pop()
        if isinstance(node, Variable):
            names.add(node.name)
        elif isinstance(node, Recursion):
            names.add(node.variable)
            stack.append(node.body)
        elif isinstance(node, Labelled):
            names.add(node.label)
            stack.append(node.body)
        elif isinstance(node, Hiding):
            names.add(node.channel)
            stack.append(node.body)
        elif isinstance(node, Prefix):
            subject = action_channel(node.action)
            if subject is not None:
                names.add(subject)
            names.update(action_binders(node.action))
            stack.append(node.continuation)
        elif isinstance(node, (Parallel, Sum)):
            stack.extend([node.left, node.right])
    return names


def actions(process: Process) -> list[Action]:
    """act(P): 出現する全ての前置アクション（前順）"""
    found: list[Action] = []

    def walk(node: Process) -> None:
        if isinstance(node, Prefix):
            found.append(node.action)
            walk(node.continuation)
        elif isinstance(node, (Parallel, Sum)):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, (Recursion, Labelled, Hiding)):
            walk(node.body)

    walk(process)
    return found


# ---------------------------------------------------------------------------
# チャネル置換
# ---------------------------------------------------------------------------


def _rename_action(action: Action, mapping: Mapping[str, str]) -> Action:
    if isinstance(action, (Send, Receive, Invite, Accept)):
        return replace(action, channel=mapping.get(action.channel, action.channel))
    return action


def substitute(
    process: Process,
    mapping: Mapping[str, str],
    avoid_capture: bool = False,
    fresh: Optional[FreshNames] = None,
) -> Process:
    """
    チャネルの同時置換 P{b̃/ã}

    Args:
        process: 対象プロセス
        mapping: 置換（元の名前 → 新しい名前）
        avoid_capture: 捕獲が起こる束縛名を新名に付け替えるか
        fresh: 付け替えに使う新名生成器

    Returns:
        Process: 置換後のプロセス

    Raises:
        CaptureRiskError: avoid_captureがFalseで、置換先の名前が束縛されている場合
    """
    if not mapping:
        return process
    if avoid_capture and fresh is None:
        fresh = FreshNames(all_names(process) | set(mapping) | set(mapping.values()))
    return _substitute(process, dict(mapping), avoid_capture, fresh)


def _open_binders(
    binders: tuple[str, ...],
    body_free: frozenset[str],
    mapping: dict[str, str],
    avoid_capture: bool,
    fresh: Optional[FreshNames],
) -> tuple[tuple[str, ...], dict[str, str]]:
    """束縛子の下に降りるときの置換と束縛名を求める"""
    inner = {k: v for k, v in mapping.items() if k not in binders}
    targets = {v for k, v in inner.items() if k in body_free}
    renamed: list[str] = []
    for binder in binders:
        if binder in targets:
            if not avoid_capture or fresh is None:
                raise CaptureRiskError(f"Substitution would capture bound channel {binder}")
            new_name = fresh.fresh(binder)
            inner[binder] = new_name
            renamed.append(new_name)
        else:
            renamed.append(binder)
    return tuple(renamed), inner


def _substitute(
    process: Process,
    mapping: dict[str, str],
    avoid_capture: bool,
    fresh: Optional[FreshNames],
) -> Process:
    if not mapping or isinstance(process, (Inaction, Variable)):
        return process
    if isinstance(process, Prefix):
        action = _rename_action(process.action, mapping)
        binders = action_binders(process.action)
        if binders:
            new_binders, inner = _open_binders(
                binders, free_channels(process.continuation), mapping, avoid_capture, fresh
            )
            action = replace(action, channels=new_binders)  # type: ignore[arg-type]
            return Prefix(action, _substitute(process.continuation, inner, avoid_capture, fresh))
        return Prefix(action, _substitute(process.continuation, mapping, avoid_capture, fresh))
    if isinstance(process, Hiding):
        (channel,), inner = _open_binders(
            (process.channel,), free_channels(process.body), mapping, avoid_capture, fresh
        )
        return Hiding(channel, _substitute(process.body, inner, avoid_capture, fresh))
    if isinstance(process, Parallel):
        return Parallel(
            _substitute(process.left, mapping, avoid_capture, fresh),
            _substitute(process.right, mapping, avoid_capture, fresh),
        )
    if isinstance(process, Sum):
        return Sum(
            _substitute(process.left, mapping, avoid_capture, fresh),
            _substitute(process.right, mapping, avoid_capture, fresh),
        )
    if isinstance(process, Recursion):
        return Recursion(process.variable, _substitute(process.body, mapping, avoid_capture, fresh))
    return Labelled(process.label, _substitute(process.body, mapping, avoid_capture, fresh))


def instantiate(
    process: Process, signature: tuple[str, ...], channels: tuple[str, ...]
) -> Process:
    """
    P⟨c̃⟩: ロールのチャネルシグネチャを具体的なチャネル組に位置で置き換える

    Raises:
        ValueError: 長さが一致しない場合
    """
    if len(signature) != len(channels):
        raise ValueError(f"Channel tuple {channels} does not match signature {signature}")
    mapping = {old: new for old, new in zip(signature, channels) if old != new}
    return substitute(process, mapping, avoid_capture=True)


# ---------------------------------------------------------------------------
# プロセス変数・0の置換
# ---------------------------------------------------------------------------


def substitute_process_variable(process: Process, variable: str, replacement: Process) -> Process:
    """
    P{Q/X}（捕獲回避）

    Args:
        process: 対象プロセス
        variable: 置換する変数X
        replacement: 代入するプロセスQ

    Returns:
        Process: 置換後のプロセス
    """
    if variable not in free_variables(process):
        return process
    replacement_channels = free_channels(replacement)
    replacement_variables = free_variables(replacement)
    fresh = FreshNames(all_names(process) | all_names(replacement))

    def walk(node: Process) -> Process:
        if isinstance(node, Variable):
            return replacement if node.name == variable else node
        if isinstance(node, Inaction) or variable not in free_variables(node):
            return node
        if isinstance(node, Recursion):
            if node.variable in replacement_variables:
                new_variable = fresh.fresh(node.variable)
                body = substitute_process_variable(node.body, node.variable, Variable(new_variable))
                return Recursion(new_variable, walk(body))
            return Recursion(node.variable, walk(node.body))
        if isinstance(node, Prefix):
            binders = action_binders(node.action)
            clashes = {b: fresh.fresh(b) for b in binders if b in replacement_channels}
            if clashes:
                channels = tuple(clashes.get(b, b) for b in binders)
                action = replace(node.action, channels=channels)  # type: ignore[arg-type]
                continuation = substitute(node.continuation, clashes)
                return Prefix(action, walk(continuation))
            return Prefix(node.action, walk(node.continuation))
        if isinstance(node, Hiding):
            if node.channel in replacement_channels:
                new_channel = fresh.fresh(node.channel)
                body = substitute(node.body, {node.channel: new_channel})
                return Hiding(new_channel, walk(body))
            return Hiding(node.channel, walk(node.body))
        if isinstance(node, Parallel):
            return Parallel(walk(node.left), walk(node.right))
        if isinstance(node, Sum):
            return Sum(walk(node.left), walk(node.right))
        return Labelled(node.label, walk(node.body))

    return walk(process)


def replace_inaction(process: Process, replacement: Process) -> Process:
    """
    P{Q/0}: 全ての0の葉をQに置き換える

    Qの自由チャネルを捕獲する束縛名は付け替える。
    """
    if isinstance(replacement, Inaction):
        return process
    replacement_channels = free_channels(replacement)
    fresh = FreshNames(all_names(process) | all_names(replacement))

    def walk(node: Process) -> Process:
        if isinstance(node, Inaction):
            return replacement
        if isinstance(node, Variable):
            return node
        if isinstance(node, Prefix):
            binders = action_binders(node.action)
            clashes = {b: fresh.fresh(b) for b in binders if b in replacement_channels}
            if clashes:
                channels = tuple(clashes.get(b, b) for b in binders)
                action = replace(node.action, channels=channels)  # type: ignore[arg-type]
                return Prefix(action, walk(substitute(node.continuation, clashes)))
            return Prefix(node.action, walk(node.continuation))
        if isinstance(node, Hiding):
            if node.channel in replacement_channels:
                new_channel = fresh.fresh(node.channel)
                return Hiding(new_channel, walk(substitute(node.body, {node.channel: new_channel})))
            return Hiding(node.channel, walk(node.body))
        if isinstance(node, Parallel):
            return Parallel(walk(node.left), walk(node.right))
        if isinstance(node, Sum):
            return Sum(walk(node.left), walk(node.right))
        if isinstance(node, Recursion):
            return Recursion(node.variable, walk(node.body))
        return Labelled(node.label, walk(node.body))

    return walk(process)


# ---------------------------------------------------------------------------
# 束縛名の付け替え
# ---------------------------------------------------------------------------


def rename_apart(process: Process, fresh: Optional[FreshNames] = None) -> Process:
    """
    全ての束縛子を大域的に新しい名前へ付け替えたα変種を返す

    Args:
        process: 対象プロセス
        fresh: 新名生成器（省略時はプロセス内の名前を避ける生成器）

    Returns:
        Process: 束縛名規約を満たすプロセス
    """
    generator = fresh or FreshNames(all_names(process))

    def walk(node: Process, channels: dict[str, str], variables: dict[str, str]) -> Process:
        if isinstance(node, Inaction):
            return node
        if isinstance(node, Variable):
            return Variable(variables.get(node.name, node.name))
        if isinstance(node, Recursion):
            new_variable = generator.fresh(node.variable)
            return Recursion(
                new_variable, walk(node.body, channels, {**variables, node.variable: new_variable})
            )
        if isinstance(node, Hiding):
            new_channel = generator.fresh(node.channel)
            return Hiding(
                new_channel, walk(node.body, {**channels, node.channel: new_channel}, variables)
            )
        if isinstance(node, Prefix):
            action = _rename_action(node.action, channels)
            binders = action_binders(node.action)
            if binders:
                renamed = {b: generator.fresh(b) for b in binders}
                action = replace(
                    action, channels=tuple(renamed[b] for b in binders)
                )  # type: ignore[arg-type]
                return Prefix(action, walk(node.continuation, {**channels, **renamed}, variables))
            return Prefix(action, walk(node.continuation, channels, variables))
        if isinstance(node, Parallel):
            left = walk(node.left, channels, variables)
            return Parallel(left, walk(node.right, channels, variables))
        if isinstance(node, Sum):
            return Sum(walk(node.left, channels, variables), walk(node.right, channels, variables))
        return Labelled(node.label, walk(node.body, channels, variables))

    return walk(process, {}, {})
