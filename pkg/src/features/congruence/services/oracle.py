"""
構造合同の書き換えオラクル

構造合同の各法則を一歩の書き換えとして適用し、両側から有界に探索する。
正規形による判定の検証にのみ使う。
"""

from collections import deque
from typing import Iterator

from ...syntax.domain.process import (
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
    node_count,
)
from ...syntax.services.names import (
    FreshNames,
    all_names,
    free_channels,
    free_variables,
    substitute,
)


def alpha_key(process: Process, env: dict[str, str] | None = None, depth: int = 0) -> str:
    """α同値な項で等しくなる文字列（並べ替えはしない）"""
    env = env or {}
    if isinstance(process, Inaction):
        return "0"
    if isinstance(process, Variable):
        return "$" + env.get(process.name, process.name)
    if isinstance(process, Recursion):
        name = f"~v{depth}"
        return f"rec {name}.({alpha_key(process.body, {**env, process.variable: name}, depth + 1)})"
    if isinstance(process, Labelled):
        return f"{process.label}:[{alpha_key(process.body, env, depth)}]"
    if isinstance(process, Hiding):
        name = f"~c{depth}"
        return f"new {name}.({alpha_key(process.body, {**env, process.channel: name}, depth + 1)})"
    if isinstance(process, Parallel):
        return f"({alpha_key(process.left, env, depth)} | {alpha_key(process.right, env, depth)})"
    if isinstance(process, Sum):
        return f"({alpha_key(process.left, env, depth)} + {alpha_key(process.right, env, depth)})"
    action = process.action
    if isinstance(action, (Send, Receive)):
        mark = "!" if isinstance(action, Send) else "?"
        head = f"{env.get(action.channel, action.channel)}{mark}{action.message}"
        return f"{head}.{alpha_key(process.continuation, env, depth)}"
    if isinstance(action, (Invite, Accept)):
        names = [f"~c{depth + i}" for i in range(len(action.channels))]
        inner = {**env, **dict(zip(action.channels, names))}
        tag = f"inv{action.parties}" if isinstance(action, Invite) else f"acc{action.index}"
        head = f"{env.get(action.channel, action.channel)}{tag}({','.join(names)})"
        return f"{head}.{alpha_key(process.continuation, inner, depth + len(names))}"
    return f"tau.{alpha_key(process.continuation, env, depth)}"


def _extrude(name: str, body: Process, sibling: Process, fresh: FreshNames) -> Process:
    """(νa)P | Q → (νa)(P | Q)（必要ならaを付け替える）"""
    if name in free_channels(sibling):
        renamed = fresh.fresh(name)
        body = substitute(body, {name: renamed}, avoid_capture=True)
        name = renamed
    return Hiding(name, Parallel(body, sibling))


def _root_rewrites(process: Process, fresh: FreshNames) -> Iterator[Process]:
    if isinstance(process, (Parallel, Sum)):
        kind = type(process)
        left, right = process.left, process.right
        yield kind(right, left)
        if isinstance(left, kind):
            yield kind(left.left, kind(left.right, right))
        if isinstance(right, kind):
            yield kind(kind(left, right.left), right.right)
        if isinstance(right, Inaction):
            yield left
        if isinstance(left, Inaction):
            yield right
        if kind is Parallel:
            if (
                isinstance(left, Labelled)
                and isinstance(right, Labelled)
                and left.label == right.label
            ):
                yield Labelled(left.label, Parallel(left.body, right.body))
            if isinstance(left, Hiding):
                yield _extrude(left.channel, left.body, right, fresh)
            if isinstance(right, Hiding):
                yield _extrude(right.channel, right.body, left, fresh)
    elif isinstance(process, Hiding):
        body = process.body
        if process.channel not in free_channels(body):
            yield body
        if isinstance(body, Hiding):
            yield Hiding(body.channel, Hiding(process.channel, body.body))
        if isinstance(body, Parallel):
            if process.channel not in free_channels(body.right):
                yield Parallel(Hiding(process.channel, body.left), body.right)
            if process.channel not in free_channels(body.left):
                yield Parallel(body.left, Hiding(process.channel, body.right))
        if isinstance(body, Labelled):
            yield Labelled(body.label, Hiding(process.channel, body.body))
    elif isinstance(process, Recursion):
        if process.variable not in free_variables(process.body):
            yield process.body
    elif isinstance(process, Labelled):
        body = process.body
        if isinstance(body, Labelled):
            yield Labelled(process.label, body.body)
        if isinstance(body, Parallel):
            yield Parallel(Labelled(process.label, body.left), Labelled(process.label, body.right))
        if isinstance(body, Hiding):
            yield Hiding(body.channel, Labelled(process.label, body.body))


def rewrites(process: Process, fresh: FreshNames | None = None) -> Iterator[Process]:
    """一歩の書き換えで得られる項を全て列挙する"""
    fresh = fresh or FreshNames(all_names(process))
    yield from _root_rewrites(process, fresh)
    if isinstance(process, Prefix):
        for child in rewrites(process.continuation, fresh):
            yield Prefix(process.action, child)
    elif isinstance(process, (Parallel, Sum)):
        kind = type(process)
        for child in rewrites(process.left, fresh):
            yield kind(child, process.right)
        for child in rewrites(process.right, fresh):
            yield kind(process.left, child)
    elif isinstance(process, Recursion):
        for child in rewrites(process.body, fresh):
            yield Recursion(process.variable, child)
    elif isinstance(process, Labelled):
        for child in rewrites(process.body, fresh):
            yield Labelled(process.label, child)
    elif isinstance(process, Hiding):
        for child in rewrites(process.body, fresh):
            yield Hiding(process.channel, child)


def _reachable(start: Process, max_size: int, max_steps: int, max_terms: int) -> set[str]:
    seen = {alpha_key(start)}
    queue: deque[tuple[Process, int]] = deque([(start, 0)])
    while queue and len(seen) < max_terms:
        term, steps = queue.popleft()
        if steps >= max_steps:
            continue
        for successor in rewrites(term):
            if node_count(successor) > max_size:
                continue
            key = alpha_key(successor)
            if key not in seen:
                seen.add(key)
                queue.append((successor, steps + 1))
    return seen


def oracle_congruent(
    p: Process, q: Process, max_steps: int = 6, slack: int = 2, max_terms: int = 20000
) -> bool:
    """
    両側からの有界な書き換え探索で P ≡ Q の導出を探す

    Trueなら導出が存在する。Falseは探索範囲内で見つからなかったことを意味する。
    """
    max_size = max(node_count(p), node_count(q)) + slack
    left = _reachable(p, max_size, max_steps, max_terms)
    if alpha_key(q) in left:
        return True
    right = _reachable(q, max_size, max_steps, max_terms)
    return not left.isdisjoint(right)
