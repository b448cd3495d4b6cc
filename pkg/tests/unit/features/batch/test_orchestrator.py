"""検査オーケストレーターとコーパスジョブのテスト"""

import shutil
from pathlib import Path

import pytest
import yaml

from src.features.batch.jobs.corpus_job import load_manifest
from src.features.batch.orchestrator import CheckOrchestrator
from src.features.reports.domain.models import Outcome, Report, Verdict
from src.infrastructure.config.settings import Settings
from src.shared.exceptions.errors import ConfigurationError, SessionKindError, UsageError
from tests.conftest import FIXTURES_DIR

QUOTE = str(FIXTURES_DIR / "quote.sess")
INTERLEAVING = str(FIXTURES_DIR / "interleaving.sess")


@pytest.fixture
def orchestrator() -> CheckOrchestrator:
    return CheckOrchestrator(Settings(_env_file=None))


def test_budget_override() -> None:
    """CLIの予算が設定より優先される"""
    orchestrator = CheckOrchestrator(Settings(_env_file=None, budget="2,8,500"), "1,2,3")
    assert orchestrator.budget.describe() == "1,2,3"


def test_invalid_budget() -> None:
    with pytest.raises(ConfigurationError):
        CheckOrchestrator(Settings(_env_file=None), "1,2")


def test_load_caches(orchestrator: CheckOrchestrator) -> None:
    """同じパスは一度だけ解析する"""
    assert orchestrator.load(QUOTE) is orchestrator.load(QUOTE)


def test_commands(orchestrator: CheckOrchestrator) -> None:
    assert sorted(orchestrator.commands()) == [
        "check",
        "conform",
        "infer",
        "parse",
        "privacy",
        "project",
        "slice",
        "wellformed",
    ]


class TestCommands:
    """各コマンド"""

    def test_parse(self, orchestrator: CheckOrchestrator) -> None:
        [report] = orchestrator.run_parse(QUOTE)

        assert report.passed
        assert "session QuoteReq" in report.details["source"]
        assert "process Manufacturer" in report.details["source"]

    def test_wellformed_all(self, orchestrator: CheckOrchestrator) -> None:
        reports = orchestrator.run_wellformed(QUOTE, all_sessions=True)

        assert len(reports) == 6
        assert all(r.passed for r in reports)

    def test_wellformed_one(self, orchestrator: CheckOrchestrator) -> None:
        reports = orchestrator.run_wellformed(QUOTE, "Confirm")
        assert [r.subject for r in reports] == ["Confirm", "Confirm"]

    def test_wellformed_needs_target(self, orchestrator: CheckOrchestrator) -> None:
        with pytest.raises(UsageError):
            orchestrator.run_wellformed(QUOTE)

    def test_project(self, orchestrator: CheckOrchestrator) -> None:
        [report] = orchestrator.run_project(QUOTE, "QuoteReq", "M")

        assert report.subject == "QuoteReq onto M"
        assert report.details["role"].startswith("conf?acc[2]")

    def test_project_non_participant(self, orchestrator: CheckOrchestrator) -> None:
        with pytest.raises(UsageError):
            orchestrator.run_project(QUOTE, "QuoteReq", "W")

    def test_infer_principal(self, orchestrator: CheckOrchestrator) -> None:
        [report] = orchestrator.run_infer(QUOTE, "Manufacturer")

        assert report.passed
        assert report.details["session_typing"].startswith("conf?acc[2]")

    def test_infer_untypable(self, orchestrator: CheckOrchestrator) -> None:
        [report] = orchestrator.run_infer(INTERLEAVING, "Q1")

        assert report.outcome == Outcome.FAIL
        assert report.diagnostics[0].code == "NotTypableError"

    def test_infer_against_role(self, orchestrator: CheckOrchestrator) -> None:
        [report] = orchestrator.run_infer(QUOTE, "Buyer", spec="QuoteReq", role="B")
        assert report.passed

    def test_infer_against_role_uses_environment(self, orchestrator: CheckOrchestrator) -> None:
        """ロールと照合するときは型環境を省いてもファイルのΓを使う"""
        [report] = orchestrator.run_infer(INTERLEAVING, "Q2", False, spec="A0", role="q")
        assert report.passed

    def test_infer_needs_both(self, orchestrator: CheckOrchestrator) -> None:
        with pytest.raises(UsageError):
            orchestrator.run_infer(QUOTE, "Buyer", spec="QuoteReq")

    def test_check(self, orchestrator: CheckOrchestrator) -> None:
        [report] = orchestrator.run_check(QUOTE, "QuoteSys", "QuoteReq")
        assert report.passed

    def test_communicating_spec_rejected(self, orchestrator: CheckOrchestrator) -> None:
        """仕様には統合セッションが必要"""
        with pytest.raises(SessionKindError):
            orchestrator.run_check(QUOTE, "QuoteSys", "Negotn")

    def test_slice(self, orchestrator: CheckOrchestrator) -> None:
        [report] = orchestrator.run_slice(INTERLEAVING, "Q1", "A0", "q")

        assert report.passed
        assert report.caveat is not None

    def test_privacy(self, orchestrator: CheckOrchestrator) -> None:
        [verdict] = orchestrator.run_privacy(QUOTE, "Gossip")

        assert isinstance(verdict, Verdict)
        assert verdict.outcome == Outcome.FAIL

    def test_conform(self, orchestrator: CheckOrchestrator) -> None:
        [verdict] = orchestrator.run_conform(QUOTE, "QuoteSys", "QuoteReq")
        assert verdict.passed


class TestCorpusJob:
    """マニフェストに従ったコーパスの実行"""

    @staticmethod
    def write_corpus(directory: Path, cases: list[dict]) -> None:
        shutil.copy(FIXTURES_DIR / "quote.sess", directory / "quote.sess")
        (directory / "manifest.yaml").write_text(
            yaml.safe_dump({"cases": cases}), encoding="utf-8"
        )

    def test_cases(self, tmp_path: Path, orchestrator: CheckOrchestrator) -> None:
        self.write_corpus(
            tmp_path,
            [
                {"file": "quote.sess", "command": "privacy", "args": {"system": "QuoteSys"}},
                {
                    "file": "quote.sess",
                    "command": "privacy",
                    "args": {"system": "Gossip"},
                    "expect": "fail",
                },
                {"file": "quote.sess", "command": "privacy", "args": {"system": "Gossip"}},
                {"file": "quote.sess", "command": "frobnicate"},
                {"file": "missing.sess", "command": "parse"},
                {"file": "quote.sess", "command": "parse", "args": {"colour": "red"}},
            ],
        )

        reports = orchestrator.run_corpus(tmp_path)

        assert all(isinstance(r, Report) and r.check == "corpus" for r in reports)
        assert [r.passed for r in reports] == [True, True, False, False, False, False]
        assert reports[0].subject == "quote.sess: privacy system=QuoteSys"
        assert reports[2].diagnostics[0].code == "corpus.outcome"
        assert reports[2].diagnostics[0].found == "fail"
        assert reports[3].diagnostics[0].code == "corpus.command"
        assert reports[4].diagnostics[0].code == "corpus.error"
        assert reports[5].diagnostics[0].code == "corpus.error"

    def test_missing_manifest(self, tmp_path: Path, orchestrator: CheckOrchestrator) -> None:
        with pytest.raises(ConfigurationError):
            orchestrator.run_corpus(tmp_path)

    def test_invalid_manifest(self, tmp_path: Path) -> None:
        (tmp_path / "manifest.yaml").write_text(
            "cases:\n  - command: parse\n", encoding="utf-8"
        )
        with pytest.raises(ConfigurationError):
            load_manifest(tmp_path)
