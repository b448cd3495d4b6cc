"""構造合同の判定と、選択の順序・結合"""

from itertools import combinations

from ...syntax.domain.process import (
    NIL,
    Hiding,
    Inaction,
    Labelled,
    Parallel,
    Prefix,
    Process,
    Recursion,
    Sum,
    Variable,
    hide,
    parallel,
    parallel_components,
    sum_components,
    summation,
)
from ...syntax.domain.session import Session
from ...syntax.services.names import free_channels, free_variables
from ..domain.models import CanonicalForm
from ..providers.fingerprint_cache import FingerprintCache
from .normal_form import canonicalize
from .session_normal_form import canonicalize_session

process_cache: FingerprintCache[Process] = FingerprintCache(canonicalize)
session_cache: FingerprintCache[Session] = FingerprintCache(canonicalize_session)


def normalize(process: Process) -> Process:
    """構造合同の正規形"""
    return process_cache.canonical(process).term


def fingerprint(process: Process) -> str:
    """正規形の指紋（合同な項で等しい）"""
    return process_cache.fingerprint(process)


def canonical_form(process: Process) -> CanonicalForm[Process]:
    return process_cache.canonical(process)


def normalize_session(session: Session) -> Session:
    return session_cache.canonical(session).term


def session_fingerprint(session: Session) -> str:
    return session_cache.fingerprint(session)


def proc_congruent(p: Process, q: Process) -> bool:
    """P ≡ Q"""
    return p == q or fingerprint(p) == fingerprint(q)


def session_congruent(s: Session, t: Session) -> bool:
    """S ≡ T"""
    return s == t or session_fingerprint(s) == session_fingerprint(t)


# ---------------------------------------------------------------------------
# 選択の順序 ⊑ と結合 ⊔
# ---------------------------------------------------------------------------


def summands(process: Process) -> list[Process]:
    """正規形の最上位の被選択項（0なら空）"""
    normalized = normalize(process)
    if isinstance(normalized, Inaction):
        return []
    return sum_components(normalized)


def summand_leq(p: Process, q: Process) -> bool:
    """
    P ⊑ Q（P + R ≡ Q となるRが存在する）

    被選択項の多重集合の包含で判定する。
    """
    remaining: dict[str, int] = {}
    for summand in summands(q):
        key = fingerprint(summand)
        remaining[key] = remaining.get(key, 0) + 1
    for summand in summands(p):
        key = fingerprint(summand)
        if remaining.get(key, 0) == 0:
            return False
        remaining[key] -= 1
    return True


def strict_summand(p: Process, q: Process) -> bool:
    """P ⊏ Q"""
    return summand_leq(p, q) and not proc_congruent(p, q)


def join(p: Process, q: Process) -> Process:
    """P ⊔ Q"""
    if summand_leq(q, p):
        return p
    if strict_summand(p, q):
        return q
    return Sum(p, q)


def recursion_closure(process: Process, variable: str) -> Process:
    """P^[X]: XがPに自由に現れればrec X P、そうでなければP"""
    if variable in free_variables(process):
        return Recursion(variable, process)
    return process


def _absorb(process: Process) -> Process:
    if isinstance(process, (Inaction, Variable)):
        return process
    if isinstance(process, Prefix):
        return Prefix(process.action, _absorb(process.continuation))
    if isinstance(process, Recursion):
        return Recursion(process.variable, _absorb(process.body))
    if isinstance(process, Labelled):
        return Labelled(process.label, _absorb(process.body))
    if isinstance(process, Hiding):
        return Hiding(process.channel, _absorb(process.body))
    if isinstance(process, Parallel):
        return parallel(*[_absorb(c) for c in parallel_components(process)])
    unique: dict[str, Process] = {}
    for summand in sum_components(process):
        absorbed = _absorb(summand)
        unique.setdefault(fingerprint(absorbed), absorbed)
    return summation(*unique.values())


def absorb_duplicates(process: Process) -> Process:
    """
    選択の重複する被選択項を再帰的に吸収した正規形

    ⊔の吸収に合わせて選択を集合として扱う比較に使う。
    """
    current = normalize(process)
    while True:
        absorbed = normalize(_absorb(current))
        if fingerprint(absorbed) == fingerprint(current):
            return absorbed
        current = absorbed


def absorbing_congruent(p: Process, q: Process) -> bool:
    """重複吸収後の構造合同"""
    return fingerprint(absorb_duplicates(p)) == fingerprint(absorb_duplicates(q))


# ---------------------------------------------------------------------------
# 分解集合
# ---------------------------------------------------------------------------


def _linked_groups(components: list[Process], hidden: list[str]) -> list[list[Process]]:
    """隠蔽名を共有する成分をまとめる"""
    groups: list[tuple[set[str], list[Process]]] = []
    for component in components:
        names = free_channels(component) & set(hidden)
        merged_names, merged = set(names), [component]
        rest = []
        for group_names, group in groups:
            if group_names & merged_names:
                merged_names |= group_names
                merged = group + merged
            else:
                rest.append((group_names, group))
        groups = rest + [(merged_names, merged)]
    return [group for _, group in groups]


def _split_atoms(process: Process) -> tuple[list[str], list[Process]]:
    """並行の分割に使う単位（ラベル付き成分は中身ごとに分ける）"""
    hidden: list[str] = []
    node = normalize(process)
    while isinstance(node, Hiding):
        hidden.append(node.channel)
        node = node.body
    atoms: list[Process] = []
    for component in parallel_components(node):
        if isinstance(component, Inaction):
            continue
        if isinstance(component, Labelled) and not isinstance(component.body, Inaction):
            atoms.extend(Labelled(component.label, c) for c in parallel_components(component.body))
        else:
            atoms.append(component)
    return hidden, atoms


def sub_par(process: Process) -> list[tuple[Process, Process]]:
    """
    sub_∥(P): P1 | P2 ≡ P となる組の一覧

    隠蔽名を共有する成分は同じ側に置く。ラベル付き成分はラベルの中身ごとに分ける。
    """
    hidden, atoms = _split_atoms(process)
    groups = _linked_groups(atoms, hidden)
    pairs: dict[tuple[str, str], tuple[Process, Process]] = {}
    for size in range(len(groups) + 1):
        for chosen in combinations(range(len(groups)), size):
            left_parts = [c for i in chosen for c in groups[i]]
            right_parts = [c for i in range(len(groups)) if i not in chosen for c in groups[i]]
            left = _rehide(hidden, left_parts)
            right = _rehide(hidden, right_parts)
            key = (fingerprint(left), fingerprint(right))
            pairs.setdefault(key, (normalize(left), normalize(right)))
    return list(pairs.values())


def _rehide(hidden: list[str], components: list[Process]) -> Process:
    body = parallel(*components) if components else NIL
    used = free_channels(body)
    return hide([h for h in hidden if h in used], body)


def sub_sum(process: Process) -> list[tuple[Process, Process]]:
    """sub_⊔(P): P1 ⊔ P2 ≡ P となる組の一覧"""
    items = summands(process)
    whole = normalize(process)
    pairs: dict[tuple[str, str], tuple[Process, Process]] = {}

    def add(left: Process, right: Process) -> None:
        key = (fingerprint(left), fingerprint(right))
        pairs.setdefault(key, (normalize(left), normalize(right)))

    for size in range(len(items) + 1):
        for chosen in combinations(range(len(items)), size):
            part = summation(*[items[i] for i in chosen])
            rest = summation(*[items[i] for i in range(len(items)) if i not in chosen])
            add(whole, part)
            if size < len(items):
                add(part, whole)
            if not summand_leq(part, rest) and not summand_leq(rest, part):
                add(part, rest)
    return list(pairs.values())
