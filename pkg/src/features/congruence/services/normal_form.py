"""
プロセスの構造合同正規形

正規化は二段階で行う。
1. 構造の正規化: 並行・選択の平坦化と0の除去、不要な束縛子の除去、
   隠蔽の並行合成・ラベルの外への移動、ラベルの吸収と併合。
2. 正準化: 束縛名を深さで番号付けした正準名に置き換え、
   並行・選択の子を指紋順に並べる。
"""

from dataclasses import dataclass, field
from itertools import islice, permutations, product
from typing import Iterator

from ...syntax.domain.process import (
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
    Sum,
    Variable,
    hide,
    parallel,
    parallel_components,
    sum_components,
    summation,
)
from ...syntax.services.names import (
    FreshNames,
    all_names,
    free_channels,
    free_variables,
    substitute,
)
from ..domain.models import CanonicalForm

# 隠蔽名の並べ替えを試す上限
MAX_HIDDEN_PERMUTATIONS = 720


@dataclass
class _Block:
    """(νh̃)(C1 | ... | Cn) の形の中間表現"""

    hidden: list[str] = field(default_factory=list)
    components: list[Process] = field(default_factory=list)

    def to_process(self) -> Process:
        return hide(self.hidden, parallel(*self.components))


def _merge_labels(components: list[Process]) -> list[Process]:
    """同じラベルの成分を l:P | l:Q ≡ l:(P|Q) で一つにまとめる"""
    merged: list[Process] = []
    positions: dict[str, int] = {}
    for component in components:
        if not isinstance(component, Labelled):
            merged.append(component)
            continue
        if component.label not in positions:
            positions[component.label] = len(merged)
            merged.append(component)
            continue
        index = positions[component.label]
        current = merged[index]
        assert isinstance(current, Labelled)
        body = [
            c
            for c in parallel_components(current.body) + parallel_components(component.body)
            if not isinstance(c, Inaction)
        ]
        merged[index] = Labelled(component.label, parallel(*body))
    return merged


class _StructuralNormalizer:
    def __init__(self, process: Process) -> None:
        self.fresh = FreshNames(all_names(process))

    def run(self, process: Process) -> Process:
        return self.block(process).to_process()

    def block(self, process: Process) -> _Block:
        if isinstance(process, Inaction):
            return _Block()
        if isinstance(process, Variable):
            return _Block(components=[process])
        if isinstance(process, Prefix):
            return _Block(components=[Prefix(process.action, self.run(process.continuation))])
        if isinstance(process, Recursion):
            body = self.block(process.body)
            body_process = body.to_process()
            if process.variable not in free_variables(body_process):
                return body
            return _Block(components=[Recursion(process.variable, body_process)])
        if isinstance(process, Hiding):
            body = self.block(process.body)
            if process.channel not in free_channels(body.to_process()):
                return body
            return _Block([process.channel] + body.hidden, body.components)
        if isinstance(process, Parallel):
            return self.combine(
                [self.block(component) for component in parallel_components(process)]
            )
        if isinstance(process, Sum):
            summands: list[Process] = []
            for summand in sum_components(process):
                normalized = self.run(summand)
                if not isinstance(normalized, Inaction):
                    summands.extend(sum_components(normalized))
            if not summands:
                return _Block()
            if len(summands) == 1:
                return self.block(summands[0])
            return _Block(components=[summation(*summands)])
        # Labelled
        body = self.block(process.body)
        stripped: list[Process] = []
        for component in body.components:
            if isinstance(component, Labelled):
                stripped.extend(
                    c for c in parallel_components(component.body) if not isinstance(c, Inaction)
                )
            else:
                stripped.append(component)
        return _Block(body.hidden, [Labelled(process.label, parallel(*stripped))])

    def combine(self, blocks: list[_Block]) -> _Block:
        """隠蔽名の衝突を避けながら並行合成をまとめる"""
        result = _Block()
        for index, block in enumerate(blocks):
            others: set[str] = set(result.hidden)
            for component in result.components:
                others |= all_names(component)
            for j, other in enumerate(blocks):
                if j != index:
                    others |= all_names(other.to_process())
            renaming = {h: self.fresh.fresh(h) for h in block.hidden if h in others}
            components = block.components
            if renaming:
                components = [substitute(c, renaming) for c in components]
            result.hidden.extend(renaming.get(h, h) for h in block.hidden)
            result.components.extend(components)
        result.components = _merge_labels(result.components)
        return result


def normalize_structure(process: Process) -> Process:
    """構造の正規化（名前はそのまま、子の順序は未整列）"""
    return _StructuralNormalizer(process).run(process)


# ---------------------------------------------------------------------------
# 正準化
# ---------------------------------------------------------------------------


def _action_key(
    action: Action, env: dict[str, str], depth: int
) -> tuple[str, dict[str, str], int]:
    """アクションの指紋と、継続部で使う環境・深さ"""
    if isinstance(action, Send):
        return f"{env.get(action.channel, action.channel)}!{action.message}", env, depth
    if isinstance(action, Receive):
        return f"{env.get(action.channel, action.channel)}?{action.message}", env, depth
    if isinstance(action, (Invite, Accept)):
        names = [f"~c{depth + i}" for i in range(len(action.channels))]
        inner = {**env, **dict(zip(action.channels, names))}
        subject = env.get(action.channel, action.channel)
        if isinstance(action, Invite):
            key = f"{subject}!inv[{action.parties}]({','.join(names)})"
        else:
            key = f"{subject}?acc[{action.index}]({','.join(names)})"
        return key, inner, depth + len(names)
    return "tau", env, depth


def _orderings(names: list[str], signatures: dict[str, str]) -> Iterator[list[str]]:
    """同じ不変量を持つ隠蔽名の並べ替えを列挙する"""
    ordered = sorted(names, key=lambda n: signatures[n])
    groups: list[list[str]] = []
    for name in ordered:
        if groups and signatures[groups[-1][0]] == signatures[name]:
            groups[-1].append(name)
        else:
            groups.append([name])
    for choice in product(*(permutations(group) for group in groups)):
        yield [name for group in choice for name in group]


def _canon(process: Process, env: dict[str, str], depth: int) -> tuple[str, Process]:
    if isinstance(process, Inaction):
        return "0", process
    if isinstance(process, Variable):
        return "$" + env.get(process.name, process.name), process
    if isinstance(process, Recursion):
        name = f"~v{depth}"
        key, body = _canon(process.body, {**env, process.variable: name}, depth + 1)
        return f"rec {name}.({key})", Recursion(process.variable, body)
    if isinstance(process, Prefix):
        action_key, inner, inner_depth = _action_key(process.action, env, depth)
        key, continuation = _canon(process.continuation, inner, inner_depth)
        return f"{action_key}.{key}", Prefix(process.action, continuation)
    if isinstance(process, Labelled):
        key, body = _canon(process.body, env, depth)
        return f"{process.label}:[{key}]", Labelled(process.label, body)
    if isinstance(process, (Parallel, Sum)):
        is_parallel = isinstance(process, Parallel)
        flatten = parallel_components if is_parallel else sum_components
        parts = sorted(
            (_canon(component, env, depth) for component in flatten(process)),
            key=lambda part: part[0],
        )
        separator = " | " if is_parallel else " + "
        rebuild = parallel if is_parallel else summation
        return (
            "(" + separator.join(key for key, _ in parts) + ")",
            rebuild(*[term for _, term in parts]),
        )
    # Hiding
    names: list[str] = []
    node: Process = process
    while isinstance(node, Hiding):
        names.append(node.channel)
        node = node.body
    canonical = [f"~c{depth + i}" for i in range(len(names))]
    inner_depth = depth + len(names)
    if len(names) == 1:
        key, body = _canon(node, {**env, names[0]: canonical[0]}, inner_depth)
        return f"new {canonical[0]}.{key}", Hiding(names[0], body)

    signatures: dict[str, str] = {}
    for name in names:
        marked = {**env, **{other: "~?" for other in names}, name: "~*"}
        signatures[name] = _canon(node, marked, inner_depth)[0]

    best: tuple[str, Process, list[str]] | None = None
    for ordering in islice(_orderings(names, signatures), MAX_HIDDEN_PERMUTATIONS):
        key, body = _canon(node, {**env, **dict(zip(ordering, canonical))}, inner_depth)
        if best is None or key < best[0]:
            best = (key, body, ordering)
    assert best is not None
    key, body, ordering = best
    return f"new {','.join(canonical)}.{key}", hide(ordering, body)


def canonicalize(process: Process) -> CanonicalForm[Process]:
    """
    正規形と指紋を計算する

    Args:
        process: 対象プロセス

    Returns:
        CanonicalForm[Process]: 正規化した項と指紋
    """
    key, term = _canon(normalize_structure(process), {}, 0)
    return CanonicalForm(term=term, fingerprint=key)
