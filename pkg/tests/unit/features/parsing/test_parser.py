"""パーサーのテスト"""

import pytest

from src.features.congruence.services.congruence import proc_congruent
from src.features.parsing.domain.models import SourceFile
from src.features.parsing.services.parser import parse
from src.features.parsing.services.printer import format_process, format_source
from src.features.syntax.domain.process import (
    NIL,
    Accept,
    Invite,
    Parallel,
    Prefix,
    Receive,
    Send,
    Sum,
)
from src.features.syntax.domain.session import (
    END,
    Communication,
    Concatenation,
    Establishment,
    SessionUnion,
)
from src.shared.exceptions.errors import (
    DuplicateDeclarationError,
    SessionKindError,
    SessionToolError,
    SurfaceSyntaxError,
    UnknownSessionNameError,
)
from tests.conftest import parse_process, parse_session


def test_parse_declarations(quote_source: SourceFile) -> None:
    """宣言を種類ごとに宣言順で保持する"""
    assert list(quote_source.sessions) == ["QuoteReq", "Negotn", "Confirm"]
    assert quote_source.session("Negotn").communicating
    assert not quote_source.session("QuoteReq").communicating
    assert [b.channel for b in quote_source.channels] == ["neg", "conf"]
    assert list(quote_source.processes) == ["Buyer", "Supplier", "Manufacturer"]
    assert quote_source.system("QuoteSys").participants == ["B", "S", "M"]
    assert quote_source.system("Gossip").participants == ["B", "S", "M", "W"]


def test_establishment_resolves_body(quote_source: SourceFile) -> None:
    """確立は宣言名を本体に解決し、入れ子も保持する"""
    body = quote_source.session("QuoteReq").body
    assert isinstance(body, Establishment)
    assert body.parties == ("B", "S")
    assert body.session == "Negotn"
    assert body.body == quote_source.session("Negotn").body
    assert isinstance(body.nested, Establishment)
    assert body.nested.parties == ("S", "M")
    assert body.nested.nested == END


def test_environment_lookup(quote_source: SourceFile) -> None:
    """channel宣言から型環境を作る"""
    env = quote_source.environment()
    binding = env.lookup("conf")
    assert binding is not None
    assert binding.session == "Confirm"
    assert env.lookup("k") is None
    assert env.channels_for("Negotn") == ["neg"]


def test_binders_are_renamed_apart() -> None:
    """束縛名は宣言全体で一意な名前に付け替える"""
    process = parse_process("a?acc[2](c).c!v.0")
    assert process == Prefix(Accept("a", 2, ("c#1",)), Prefix(Send("c#1", "v"), NIL))


def test_process_precedence() -> None:
    """| が最も弱く、次に + が続く"""
    process = parse_process("a!v.0 + b!w.0 | c?u.0")
    assert process == Parallel(
        Sum(Prefix(Send("a", "v"), NIL), Prefix(Send("b", "w"), NIL)),
        Prefix(Receive("c", "u"), NIL),
    )


def test_invitation_range() -> None:
    """招待の範囲から参加者数を読む"""
    process = parse_process("a!inv[2..3](x,y).0")
    assert process == Prefix(Invite("a", 3, ("x#1", "y#1")), NIL)


def test_session_precedence() -> None:
    """; が (+) より強く結合する"""
    session = parse_session("<1,2:a> -> end (+) <1,2:b> -> end ; <2,1:c> -> end")
    assert session == SessionUnion(
        Communication("1", "2", "a", END),
        Concatenation(Communication("1", "2", "b", END), Communication("2", "1", "c", END)),
    )


def test_comments_are_ignored() -> None:
    """# から行末まではコメント"""
    source = parse("# コメント\nsession B = <1,2:m> -> end # 末尾\nchannel a : B\n")
    assert list(source.sessions) == ["B"]


def test_syntax_error_has_location() -> None:
    """構文エラーは行と列を持つ"""
    with pytest.raises(SurfaceSyntaxError) as exc_info:
        parse("session B = <1,2:m> -> end\nprocess P = a!v.$")
    assert exc_info.value.line == 2
    assert exc_info.value.column is not None


def test_invitation_must_start_at_two() -> None:
    """招待の範囲は2から始まる"""
    with pytest.raises(SurfaceSyntaxError):
        parse("process P = a!inv[3..4](x,y).0")


@pytest.mark.parametrize(
    "text,error",
    [
        ("session B = end\nsession B = end", DuplicateDeclarationError),
        ("channel a : B", UnknownSessionNameError),
        ("session S = <p,q:Missing>{}", UnknownSessionNameError),
        (
            "session B = <1,2:m> -> end\nsession S = <p,q:B>{}\nchannel a : S",
            SessionKindError,
        ),
        (
            "session B = <1,2:m> -> end\nsession S = <p,q:B>{} ; <p,q:m> -> end",
            SessionKindError,
        ),
        ("session B = end\nsession S = <p,p:B>{}", SessionKindError),
        ("process P = 0\nsystem Sys = A : P | B : Q", SessionToolError),
        ("process P = 0\nsystem Sys = A : P | A : P", DuplicateDeclarationError),
    ],
)
def test_declaration_errors(text: str, error: type) -> None:
    """宣言の検証エラー"""
    with pytest.raises(error):
        parse(text)


def test_unknown_session_lookup(quote_source: SourceFile) -> None:
    """未宣言のセッション名の参照"""
    with pytest.raises(UnknownSessionNameError):
        quote_source.session("Nothing")


def test_format_process_reparses() -> None:
    """表示したプロセスは再び読み込める"""
    process = parse_process("rec X.(a!v.X + b?w.(new k) k!u.0) | l:tau.0")
    assert proc_congruent(parse_process(format_process(process)), process)


def test_format_source_reparses(quote_source: SourceFile) -> None:
    """ファイル全体の表示も再び読み込める"""
    reparsed = parse(format_source(quote_source))
    assert reparsed.sessions == quote_source.sessions
    assert reparsed.channels == quote_source.channels
    for name, process in quote_source.processes.items():
        assert proc_congruent(reparsed.process(name), process)
    assert reparsed.system("Gossip").participants == ["B", "S", "M", "W"]
