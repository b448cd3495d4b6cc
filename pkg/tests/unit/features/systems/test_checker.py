"""システムの検査のテスト"""

from src.features.parsing.domain.models import SourceFile
from src.features.parsing.services.parser import parse
from src.features.reports.domain.models import Outcome
from src.features.systems.services.checker import (
    check_channel_privacy,
    check_conformance,
    well_typed_system,
)
from src.features.syntax.domain.system import ChannelBinding, TypeEnvironment
from tests.conftest import parse_process


def test_well_typed_system(quote_source: SourceFile) -> None:
    """全てのコンポーネントがロールで型付けされる"""
    report = well_typed_system(
        quote_source.system("QuoteSys"),
        quote_source.session("QuoteReq").body,
        quote_source.environment(),
        "QuoteReq",
    )
    assert report.outcome == Outcome.PASS
    assert report.check == "well-typed"
    assert report.subject == "QuoteSys : QuoteReq"


def test_participants_must_match(quote_source: SourceFile) -> None:
    """参加者の集合はセッションと一致しなければならない"""
    report = well_typed_system(
        quote_source.system("Gossip"),
        quote_source.session("QuoteReq").body,
        quote_source.environment(),
        "QuoteReq",
    )
    assert report.outcome == Outcome.FAIL
    assert report.diagnostics[0].code == "system.participants"
    assert report.diagnostics[0].found == "B, M, S, W"


def test_environment_must_mark_establishments(quote_source: SourceFile) -> None:
    """確立を印付けないチャネルの束縛は拒否する"""
    negotn = quote_source.session("Negotn")
    env = TypeEnvironment(
        quote_source.environment().bindings + (ChannelBinding("spare", "Negotn", negotn.body),)
    )
    report = well_typed_system(
        quote_source.system("QuoteSys"), quote_source.session("QuoteReq").body, env, "QuoteReq"
    )
    assert report.outcome == Outcome.FAIL
    assert [(d.code, d.subject) for d in report.diagnostics] == [("system.environment", "spare")]


def test_ill_typed_component_gets_slices(quote_source: SourceFile) -> None:
    """型付けできないコンポーネントにはスライスの診断を添える"""
    system = quote_source.system("QuoteSys").replace(
        "B", parse_process("neg!inv[2..2](c).c!item.0")
    )
    report = well_typed_system(
        system, quote_source.session("QuoteReq").body, quote_source.environment(), "QuoteReq"
    )
    assert report.outcome == Outcome.FAIL
    assert [(d.code, d.subject) for d in report.diagnostics] == [("RoleMismatchError", "B")]
    slices = report.details["slices"]["B"]
    assert slices["outcome"] == "fail"
    assert [entry["session"] for entry in slices["entries"]] == ["QuoteReq", "Negotn"]


def test_channel_privacy(quote_source: SourceFile) -> None:
    """確立で作られたチャネルは二者だけが持つ"""
    verdict = check_channel_privacy(quote_source.system("QuoteSys"))
    assert verdict.outcome == Outcome.PASS
    assert verdict.states_explored > 1


def test_channel_privacy_violation(quote_source: SourceFile) -> None:
    """三者が同じ通信チャネルを持てば違反"""
    verdict = check_channel_privacy(quote_source.system("Gossip"))
    assert verdict.outcome == Outcome.FAIL
    assert verdict.check == "channel-privacy"
    assert "Channel k" in verdict.message


def test_channel_without_partner_is_private() -> None:
    """相手のいなくなった接頭辞は干渉ではない"""
    system = parse("system Lonely = A : (a!v.b!w.0) | B : (a?v.0)").system("Lonely")
    verdict = check_channel_privacy(system)
    assert verdict.outcome == Outcome.PASS
    assert verdict.states_explored == 2


def test_losing_bidder_left_waiting_is_private() -> None:
    """競りに負けて自分のチャネルで待ち続ける参加者は干渉ではない"""
    system = parse(
        "system Bidding = Br : (a1?bid.0 + a2?bid.0) | B1 : (a1!bid.0) | B2 : (a2!bid.0)"
    ).system("Bidding")
    verdict = check_channel_privacy(system)
    assert verdict.outcome == Outcome.PASS


def test_conformance(quote_source: SourceFile) -> None:
    """システムの内部遷移はセッションの遷移に従う"""
    verdict = check_conformance(
        quote_source.system("QuoteSys"),
        quote_source.session("QuoteReq").body,
        quote_source.environment(),
    )
    assert verdict.outcome == Outcome.PASS
    assert verdict.subject == "QuoteSys"


def test_conformance_detects_unexpected_message(quote_source: SourceFile) -> None:
    """セッションにないメッセージを送れば不適合"""
    system = quote_source.system("QuoteSys").replace(
        "B", parse_process("neg!inv[2..2](c).c!other.0")
    ).replace("S", parse_process("neg?acc[2](c).c?other.0"))
    verdict = check_conformance(
        system, quote_source.session("QuoteReq").body, quote_source.environment()
    )
    assert verdict.outcome == Outcome.FAIL
    assert verdict.trace == ["B,S:Negotn", "B,S:other"]
