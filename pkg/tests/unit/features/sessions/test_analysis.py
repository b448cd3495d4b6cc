"""セッションの静的検査のテスト"""

import pytest

from src.features.parsing.domain.models import SourceFile
from src.features.reports.domain.models import Outcome
from src.features.sessions.services.analysis import (
    opid,
    race_free,
    validate_declarations,
    well_formed,
)
from src.features.syntax.domain.session import END, Communication, Establishment
from src.shared.exceptions.errors import UnknownSessionNameError
from tests.conftest import parse_session

PAIR = "session B = <1,2:m> -> end\n"


@pytest.mark.parametrize(
    "text,code",
    [
        ("<1,1:m> -> end", "wellformed.1"),
        ("<p,q,r:B>{}", "wellformed.2"),
        ("(<p,q:B>{} (x) <p,r:B>{}) ; <q,r:B>{}", "wellformed.3"),
    ],
)
def test_well_formed_violations(text: str, code: str) -> None:
    """違反した条項を診断コードで示す"""
    report = well_formed(parse_session(text, PAIR), "S")
    assert report.outcome == Outcome.FAIL
    assert [d.code for d in report.diagnostics] == [code]
    assert report.subject == "S"


def test_well_formed_repeated_party() -> None:
    """確立の参加者の重複"""
    body = Communication("1", "2", "m", END)
    session = Establishment(("p", "p"), "B", body, END)
    report = well_formed(session)
    assert [d.code for d in report.diagnostics] == ["wellformed.2"]


def test_well_formed_pass() -> None:
    """整形式なセッション"""
    report = well_formed(parse_session("<p,q:B>{} ; <q,r:B>{}", PAIR))
    assert report.passed
    assert report.check == "wellformed"


def test_opid() -> None:
    """最初に相互作用する参加者の組"""
    session = parse_session("<1,2:a> -> end (+) <2,3:b> -> <3,1:c> -> end")
    assert opid(session) == frozenset({frozenset({"1", "2"}), frozenset({"2", "3"})})


@pytest.mark.parametrize(
    "text,code",
    [
        ("<1,2:a> -> <3,4:b> -> end", "racefree.3"),
        ("<1,2:a> -> end (+) <3,4:b> -> end", "racefree.5"),
        ("<p,q:B>{} ; <r,s:B>{}", "racefree.8"),
    ],
)
def test_race_violations(text: str, code: str) -> None:
    """競合の違反は最も浅いものが先頭に来る"""
    report = race_free(parse_session(text, PAIR))
    assert report.outcome == Outcome.FAIL
    assert report.diagnostics[0].code == code
    assert report.diagnostics[0].path == "$"


@pytest.mark.parametrize(
    "text",
    [
        "<1,2:a> -> <2,1:b> -> end",
        "<1,2:a> -> end (+) <1,3:b> -> end",
        "<p,q:B>{} ; <q,r:B>{}",
        "rec t.(<1,2:a> -> t (+) <1,2:b> -> end)",
    ],
)
def test_race_free_sessions(text: str) -> None:
    """競合のないセッション"""
    assert race_free(parse_session(text, PAIR)).passed


def test_nested_violation_path() -> None:
    """入れ子の違反は位置を示す"""
    report = race_free(parse_session("<1,2:a> -> (<1,2:b> -> end (+) <3,4:c> -> end)"))
    codes = [d.code for d in report.diagnostics]
    assert "racefree.5" in codes
    assert "racefree.3" in codes
    assert report.diagnostics[0].code == "racefree.3"


def test_validate_declarations(quote_source: SourceFile) -> None:
    """全ての宣言を検査する"""
    reports = validate_declarations(quote_source)
    assert [(r.check, r.subject) for r in reports] == [
        ("wellformed", "QuoteReq"),
        ("racefree", "QuoteReq"),
        ("wellformed", "Negotn"),
        ("racefree", "Negotn"),
        ("wellformed", "Confirm"),
        ("racefree", "Confirm"),
    ]
    assert all(r.passed for r in reports)


def test_validate_unknown_name(quote_source: SourceFile) -> None:
    """未宣言の名前"""
    with pytest.raises(UnknownSessionNameError):
        validate_declarations(quote_source, ["Missing"])
