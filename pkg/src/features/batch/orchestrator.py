"""検査オーケストレーター"""

from pathlib import Path
from typing import Any, Callable, Optional, Union

from ...infrastructure.config.settings import Settings
from ...shared.exceptions.errors import SessionKindError, TypingError, UsageError
from ...shared.logging.config import get_logger
from ..parsing.domain.models import SourceFile
from ..parsing.services.parser import get_parser
from ..parsing.services.printer import format_process, format_source
from ..projection.services.projection import project
from ..reports.domain.models import Diagnostic, Outcome, Report, SliceReport, Verdict
from ..sessions.services.analysis import validate_declarations
from ..slicing.services.diagnosis import diagnose
from ..syntax.domain.session import SessionDeclaration
from ..syntax.domain.system import TypeEnvironment
from ..syntax.services.sessions import pid
from ..systems.services.checker import (
    check_channel_privacy,
    check_conformance,
    well_typed_system,
)
from ..typesystem.services.inference import infer_principal
from ..typesystem.services.verification import check_against
from .jobs.corpus_job import CorpusJob

logger = get_logger(__name__)

Result = Union[Report, Verdict, SliceReport]


class CheckOrchestrator:
    """
    検査オーケストレーター

    ソースファイルの読み込みと各Featureの検査を結び付け、設定から探索予算と
    型推論の候補数上限を注入する。
    """

    def __init__(self, settings: Settings, budget: Optional[str] = None) -> None:
        """
        Args:
            settings: アプリケーション設定
            budget: CLIで指定された探索予算 "unfold,depth,states"

        Raises:
            ConfigurationError: 予算の指定が不正な場合
        """
        self.settings = settings
        self.budget = settings.exploration_budget(budget)
        self.candidate_limit = settings.typing_candidate_limit
        self.show_progress = settings.show_progress
        self.parser = get_parser()
        self._sources: dict[str, SourceFile] = {}

        logger.info(f"CheckOrchestrator initialized (budget={self.budget.describe()})")

    def load(self, path: Union[str, Path]) -> SourceFile:
        """
        ソースファイルを読み込む（同じパスは一度だけ解析する）

        Raises:
            SessionToolError: 構文エラーや宣言の誤り
            OSError: ファイルが読めない場合
        """
        key = str(path)
        if key not in self._sources:
            self._sources[key] = self.parser.parse_file(path)
        return self._sources[key]

    def _integrating(self, source: SourceFile, name: str) -> SessionDeclaration:
        declaration = source.session(name)
        if declaration.communicating:
            raise SessionKindError(f"{name} is a communicating session, not an integrating one")
        return declaration

    # ------------------------------------------------------------------
    # コマンド
    # ------------------------------------------------------------------

    def run_parse(self, path: str) -> list[Result]:
        """ファイルを解析し、正規化した宣言を出力する"""
        source = self.load(path)
        return [
            Report(
                check="parse",
                subject=path,
                outcome=Outcome.PASS,
                details={"source": format_source(source)},
            )
        ]

    def run_wellformed(
        self, path: str, session: Optional[str] = None, all_sessions: bool = False
    ) -> list[Result]:
        """
        整形式性と競合のなさの検査

        Raises:
            UsageError: セッション名も--allも指定されていない場合
        """
        if session is None and not all_sessions:
            raise UsageError("wellformed needs --session NAME or --all")
        source = self.load(path)
        return list(validate_declarations(source, None if all_sessions else [session]))

    def run_project(self, path: str, session: str, role: str) -> list[Result]:
        """セッションを参加者に射影する"""
        source = self.load(path)
        declaration = source.session(session)
        if role not in pid(declaration.body):
            raise UsageError(f"{role} does not take part in {session}")
        projected = project(declaration.body, role, source.environment(), session, self.budget)
        details: dict[str, Any] = {"role": format_process(projected.process)}
        if projected.signature:
            details["signature"] = list(projected.signature)
        return [
            Report(
                check="projection",
                subject=f"{session} onto {role}",
                outcome=Outcome.PASS,
                details=details,
            )
        ]

    def run_infer(
        self,
        path: str,
        process: str,
        use_env: bool = True,
        spec: Optional[str] = None,
        role: Optional[str] = None,
    ) -> list[Result]:
        """
        主型付けを推論する（--specと--roleがあればロールと照合する）

        --specがあるときは use_env によらずファイルの型環境Γを使う。

        Raises:
            UsageError: --specと--roleの片方だけが指定された場合
        """
        if (spec is None) != (role is None):
            raise UsageError("infer needs both --spec and --role to check against a role")
        source = self.load(path)
        term = source.process(process)
        env = source.environment() if use_env or spec is not None else TypeEnvironment()
        if spec is not None and role is not None:
            declaration = self._integrating(source, spec)
            expected = project(declaration.body, role, env, spec, self.budget)
            return [check_against(env, term, expected, self.candidate_limit)]
        try:
            typing = infer_principal(env, term, self.candidate_limit)
        except TypingError as e:
            return [
                Report(
                    check="typing",
                    subject=process,
                    outcome=Outcome.FAIL,
                    diagnostics=[Diagnostic(code=type(e).__name__, message=str(e))],
                )
            ]
        return [
            Report(
                check="typing",
                subject=process,
                outcome=Outcome.PASS,
                details={
                    "session_typing": format_process(typing.session),
                    "channel_typing": [
                        {"channels": list(e.channels), "process": format_process(e.process)}
                        for e in typing.channels.entries
                    ],
                },
            )
        ]

    def run_check(self, path: str, system: str, spec: str) -> list[Result]:
        """システムが統合セッションを実装しているかの検査"""
        source = self.load(path)
        declaration = self._integrating(source, spec)
        return [
            well_typed_system(
                source.system(system),
                declaration.body,
                source.environment(),
                spec,
                self.budget,
                self.candidate_limit,
            )
        ]

    def run_slice(self, path: str, process: str, spec: str, role: str) -> list[Result]:
        """スライスによる診断"""
        source = self.load(path)
        declaration = self._integrating(source, spec)
        return [
            diagnose(
                source.environment(),
                source.process(process),
                declaration.body,
                role,
                spec,
                self.budget,
                self.candidate_limit,
            )
        ]

    def run_privacy(self, path: str, system: str) -> list[Result]:
        """通信チャネルのプライバシーの検査"""
        source = self.load(path)
        return [check_channel_privacy(source.system(system), self.budget, self.show_progress)]

    def run_conform(self, path: str, system: str, spec: str) -> list[Result]:
        """統合セッションへの適合性の検査"""
        source = self.load(path)
        declaration = self._integrating(source, spec)
        return [
            check_conformance(
                source.system(system),
                declaration.body,
                source.environment(),
                self.budget,
                self.show_progress,
            )
        ]

    def commands(self) -> dict[str, Callable[..., list[Result]]]:
        """コマンド名から実行関数への対応"""
        return {
            "parse": self.run_parse,
            "wellformed": self.run_wellformed,
            "project": self.run_project,
            "infer": self.run_infer,
            "check": self.run_check,
            "slice": self.run_slice,
            "privacy": self.run_privacy,
            "conform": self.run_conform,
        }

    def run_corpus(self, directory: Union[str, Path] = "corpus") -> list[Result]:
        """
        コーパスの各ファイルに指定された検査を実行する

        Raises:
            ConfigurationError: マニフェストが読めない場合
        """
        job = CorpusJob(self, Path(directory), show_progress=self.show_progress)
        return list(job.execute())
