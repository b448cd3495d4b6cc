"""構造合同のテスト"""

import pytest

from src.features.congruence.services.congruence import (
    absorb_duplicates,
    absorbing_congruent,
    fingerprint,
    join,
    normalize,
    proc_congruent,
    recursion_closure,
    session_congruent,
    strict_summand,
    sub_par,
    sub_sum,
    summand_leq,
)
from src.features.congruence.services.oracle import oracle_congruent
from src.features.syntax.domain.process import (
    NIL,
    Accept,
    Parallel,
    Prefix,
    Recursion,
    Send,
    Sum,
    Variable,
)
from tests.conftest import parse_process, parse_session

CONGRUENT_PAIRS = [
    ("a!v.0 | b!w.0", "b!w.0 | a!v.0"),
    ("a!v.0 + b!w.0", "b!w.0 + a!v.0"),
    ("(a!v.0 | b!w.0) | c!u.0", "a!v.0 | (b!w.0 | c!u.0)"),
    ("a!v.0 + 0", "a!v.0"),
    ("a!v.0 | 0", "a!v.0"),
    ("(new k) k!v.0 | b!w.0", "(new k) (k!v.0 | b!w.0)"),
    ("l:(a!v.0 | b!w.0)", "l:a!v.0 | l:b!w.0"),
    ("(new k) a!v.0", "a!v.0"),
    ("rec X.a!v.0", "a!v.0"),
]


@pytest.mark.parametrize("left,right", CONGRUENT_PAIRS)
def test_congruent_pairs(left: str, right: str) -> None:
    """合同な項は同じ指紋を持つ"""
    p, q = parse_process(left), parse_process(right)
    assert proc_congruent(p, q)
    assert fingerprint(p) == fingerprint(q)


@pytest.mark.parametrize("left,right", CONGRUENT_PAIRS)
def test_oracle_agrees(left: str, right: str) -> None:
    """書き換えオラクルでも導出が見つかる"""
    assert oracle_congruent(parse_process(left), parse_process(right))


@pytest.mark.parametrize(
    "left,right",
    [
        ("a!v.0", "a?v.0"),
        ("a!v.b!w.0", "b!w.a!v.0"),
        ("a!v.0 + a!v.0", "a!v.0"),
        ("(new k) k!v.0 | k?v.0", "(new k) (k!v.0 | k?v.0)"),
        ("l:a!v.0", "m:a!v.0"),
    ],
)
def test_non_congruent_pairs(left: str, right: str) -> None:
    """合同でない項は区別する"""
    assert not proc_congruent(parse_process(left), parse_process(right))


def test_alpha_equivalence_of_binders() -> None:
    """束縛されたチャネル名の違いは無視する"""
    p = Prefix(Accept("a", 2, ("c",)), Prefix(Send("c", "v"), NIL))
    q = Prefix(Accept("a", 2, ("d",)), Prefix(Send("d", "v"), NIL))
    assert proc_congruent(p, q)


def test_alpha_equivalence_of_recursion() -> None:
    """再帰変数名の違いは無視する"""
    p = Recursion("X", Prefix(Send("a", "v"), Variable("X")))
    q = Recursion("Y", Prefix(Send("a", "v"), Variable("Y")))
    assert proc_congruent(p, q)


def test_normalize_is_idempotent() -> None:
    """正規形の正規形は変わらない"""
    process = parse_process("(new k) (k!v.0 | b!w.0 + 0) | l:c?u.0")
    once = normalize(process)
    assert fingerprint(normalize(once)) == fingerprint(once)
    assert proc_congruent(once, process)


def test_summand_order() -> None:
    """被選択項の包含による順序"""
    small = parse_process("a!v.0")
    large = parse_process("a!v.0 + b!w.0")
    assert summand_leq(small, large)
    assert not summand_leq(large, small)
    assert summand_leq(NIL, small)
    assert strict_summand(small, large)
    assert not strict_summand(large, large)


def test_join() -> None:
    """結合は大きい方を残し、比較できなければ選択にする"""
    p = parse_process("a!v.0")
    q = parse_process("b!w.0")
    pq = parse_process("a!v.0 + b!w.0")
    assert join(pq, p) == pq
    assert join(p, pq) == pq
    assert join(p, q) == Sum(p, q)
    assert join(p, NIL) == p


def test_recursion_closure() -> None:
    """変数が自由に現れるときだけ再帰で閉じる"""
    body = Prefix(Send("a", "v"), Variable("X"))
    assert recursion_closure(body, "X") == Recursion("X", body)
    assert recursion_closure(body, "Y") == body


def test_absorb_duplicates() -> None:
    """重複する被選択項を入れ子の中まで吸収する"""
    p = parse_process("a!v.(b!w.0 + b!w.0) + a!v.b!w.0")
    assert proc_congruent(absorb_duplicates(p), parse_process("a!v.b!w.0"))
    assert absorbing_congruent(p, parse_process("a!v.b!w.0"))
    assert not proc_congruent(p, parse_process("a!v.b!w.0"))


def test_sub_par_keeps_hidden_groups() -> None:
    """隠蔽名を共有する成分は分けない"""
    process = parse_process("(new k) (k!v.0 | k?v.0) | b!w.0")
    pairs = sub_par(process)
    # 分割単位は {k!v | k?v} と {b!w} の二つなので四通り
    assert len(pairs) == 4
    for left, right in pairs:
        assert proc_congruent(Parallel(left, right), process)


def test_sub_sum_includes_whole() -> None:
    """P ⊔ P の分割も含まれる"""
    process = parse_process("a!v.0 + b!w.0")
    pairs = sub_sum(process)
    whole = fingerprint(process)
    assert any(fingerprint(left) == whole and fingerprint(right) == whole for left, right in pairs)
    for left, right in pairs:
        assert proc_congruent(join(left, right), process)


def test_session_congruence() -> None:
    """セッションの和・積の可換性"""
    left = parse_session("<1,2:a> -> end (+) <1,2:b> -> end")
    right = parse_session("<1,2:b> -> end (+) <1,2:a> -> end")
    assert session_congruent(left, right)
    assert not session_congruent(left, parse_session("<1,2:a> -> end"))
