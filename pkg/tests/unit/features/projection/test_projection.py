"""射影のテスト"""

import pytest

from src.features.congruence.services.congruence import proc_congruent
from src.features.parsing.domain.models import SourceFile
from src.features.projection.domain.models import ChannelSubstitution
from src.features.projection.services.projection import (
    channel_signature,
    mark_session,
    marks,
    participant_at,
    project,
    project_all,
    project_communicating,
    project_integrating,
    role_of,
)
from src.features.syntax.domain.process import (
    NIL,
    Accept,
    Invite,
    Prefix,
    Receive,
    Recursion,
    Send,
    Variable,
)
from src.features.syntax.domain.system import TypeEnvironment
from src.shared.exceptions.errors import (
    IllegalSubstitutionError,
    UnboundSessionError,
    ValidationError,
)
from tests.conftest import parse_process, parse_session

# 同じ組の二つのメッセージを並行に送るので、組ごとのチャネルに統合すると非決定的になる
RACING = "<1,2:a> -> end (x) <1,2:a> -> <2,1:b> -> end"


class TestCommunicatingProjection:
    """通信セッションの射影"""

    def test_pairwise_channels(self, quote_source: SourceFile) -> None:
        """参加者の組ごとのチャネルに統合する"""
        negotn = quote_source.session("Negotn").body
        assert channel_signature(negotn, "Negotn") == ("negotn_1_2",)
        role = project_communicating(negotn, "1", "Negotn")
        expected = parse_process(
            "negotn_1_2!item.negotn_1_2?quote.(negotn_1_2!accepted.0"
            " + negotn_1_2!newquote.(negotn_1_2?accepted.0 + negotn_1_2?rejected.0))"
        )
        assert proc_congruent(role.process, expected)
        assert role.participant == "1"
        assert role.signature == ("negotn_1_2",)

    def test_signature_lists_occurring_pairs(self) -> None:
        """シグネチャは現れる組だけを並べる"""
        session = parse_session("<1,2:a> -> <3,2:b> -> end")
        assert channel_signature(session, "T") == ("t_1_2", "t_2_3")

    def test_falls_back_to_prefix_channels(self) -> None:
        """統合が決定性を壊すなら接頭辞ごとのチャネルを使う"""
        session = parse_session(RACING)
        assert channel_signature(session, "R") == ("r_1", "r_2", "r_3")

    def test_illegal_substitution(self) -> None:
        """決定性を壊す置換は拒否する"""
        session = parse_session(RACING)
        substitution = ChannelSubstitution({"r_1": "x", "r_2": "x", "r_3": "y"}, ("x", "y"))
        with pytest.raises(IllegalSubstitutionError):
            project_communicating(session, "1", "R", substitution)

    def test_concatenation_and_recursion(self) -> None:
        """連接は0を置き換え、再帰は変数X_tになる"""
        concat = project_communicating(
            parse_session("<1,2:a> -> end ; <2,1:b> -> end"), "1", "S"
        )
        assert concat.process == Prefix(Send("s_1_2", "a"), Prefix(Receive("s_1_2", "b"), NIL))
        looping = project_communicating(parse_session("rec t.<1,2:a> -> t"), "2", "S")
        assert looping.process == Recursion(
            "X_t", Prefix(Receive("s_1_2", "a"), Variable("X_t"))
        )

    def test_non_participant_is_inactive(self) -> None:
        """関与しない参加者のロールは0"""
        session = parse_session("<1,2:a> -> end (+) <1,3:b> -> end")
        role = project_communicating(session, "3", "S")
        assert proc_congruent(role.process, parse_process("0 + s_1_3?b.0"))

    def test_role_of_instantiates(self, quote_source: SourceFile) -> None:
        """ロールを具体的なチャネル組で具体化する"""
        confirm = quote_source.session("Confirm").body
        role = role_of(confirm, "2", ("d",), "Confirm")
        assert proc_congruent(role, parse_process("d?quote.(d!yes.0 + d!no.0)"))
        with pytest.raises(ValueError):
            role_of(confirm, "2", ("d", "e"), "Confirm")

    def test_participant_at(self, quote_source: SourceFile) -> None:
        """参加者番号は数値順"""
        negotn = quote_source.session("Negotn").body
        assert participant_at(negotn, 2) == "2"
        with pytest.raises(ValidationError):
            participant_at(negotn, 3)

    def test_mark_session(self) -> None:
        """通信接頭辞は前順に印付ける"""
        marked = mark_session(parse_session("<1,2:a> -> end (+) <2,1:b> -> end"), "Pick")
        assert marked.marks == {"$.left": "pick_1", "$.right": "pick_2"}


class TestIntegratingProjection:
    """統合セッションの射影"""

    def test_roles(self, quote_source: SourceFile) -> None:
        """確立は招待・受諾の接頭辞になる"""
        env = quote_source.environment()
        spec = quote_source.session("QuoteReq").body
        buyer = project_integrating(spec, "B", env, "QuoteReq")
        supplier = project_integrating(spec, "S", env, "QuoteReq")
        maker = project_integrating(spec, "M", env, "QuoteReq")
        assert buyer.process == Prefix(Invite("neg", 2, ("negotn_1_2",)), NIL)
        assert supplier.process == Prefix(
            Accept("neg", 2, ("negotn_1_2",)),
            Prefix(Invite("conf", 2, ("confirm_1_2",)), NIL),
        )
        assert maker.process == Prefix(Accept("conf", 2, ("confirm_1_2",)), NIL)

    def test_marks(self, quote_source: SourceFile) -> None:
        """チャネルとセッションの印付け関係"""
        spec = quote_source.session("QuoteReq").body
        assert marks(spec, quote_source.environment()) == [
            ("neg", "Negotn"),
            ("conf", "Confirm"),
        ]

    def test_unbound_session(self, quote_source: SourceFile) -> None:
        """Γに束縛がなければエラー"""
        spec = quote_source.session("QuoteReq").body
        with pytest.raises(UnboundSessionError):
            project_integrating(spec, "B", TypeEnvironment(), "QuoteReq")

    def test_project_dispatches(self, quote_source: SourceFile) -> None:
        """セッションの種類で射影を選ぶ"""
        env = quote_source.environment()
        roles = project_all(quote_source.session("QuoteReq").body, env, "QuoteReq")
        assert list(roles) == ["B", "S", "M"]
        negotn = project(quote_source.session("Negotn").body, "2", env, "Negotn")
        assert negotn.signature == ("negotn_1_2",)
