"""コーパス検査ジョブ"""

from pathlib import Path
from typing import TYPE_CHECKING, Any, Iterator, Union

import yaml
from pydantic import BaseModel, Field, ValidationError
from tqdm import tqdm

from ....shared.exceptions.errors import ConfigurationError, SessionToolError
from ....shared.logging.config import get_logger
from ...reports.domain.models import Diagnostic, Outcome, Report, SliceReport, Verdict

if TYPE_CHECKING:
    from ..orchestrator import CheckOrchestrator

logger = get_logger(__name__)

MANIFEST_NAME = "manifest.yaml"


class CorpusCase(BaseModel):
    """マニフェストの一項目"""

    file: str = Field(description="コーパスディレクトリからの相対パス")
    command: str = Field(description="実行するコマンド（parse, wellformed, ...）")
    args: dict[str, Any] = Field(default_factory=dict, description="コマンドの引数")
    expect: Outcome = Field(default=Outcome.PASS, description="期待する結果")
    caveat: bool = Field(default=False, description="スライスの注記を期待するか")


class CorpusManifest(BaseModel):
    """コーパスのマニフェスト"""

    cases: list[CorpusCase] = Field(default_factory=list)


def load_manifest(directory: Path) -> CorpusManifest:
    """
    マニフェストを読み込む

    Raises:
        ConfigurationError: ファイルがない・形式が不正な場合
    """
    path = directory / MANIFEST_NAME
    if not path.exists():
        raise ConfigurationError(f"Corpus manifest not found: {path}")
    with open(path, encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    try:
        return CorpusManifest.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid corpus manifest {path}: {e}") from e


class CorpusJob:
    """マニフェストに列挙された検査を順に実行し、期待した結果と比べる"""

    def __init__(
        self, orchestrator: "CheckOrchestrator", directory: Path, show_progress: bool = False
    ) -> None:
        """
        Args:
            orchestrator: 各コマンドを実行するオーケストレーター
            directory: コーパスディレクトリ
            show_progress: 進捗バーを表示するか
        """
        self.orchestrator = orchestrator
        self.directory = directory
        self.show_progress = show_progress
        self.manifest = load_manifest(directory)

        logger.info(f"CorpusJob initialized: {directory} ({len(self.manifest.cases)} cases)")

    def execute(self) -> Iterator[Report]:
        """
        各項目を実行する

        Yields:
            Report: 項目ごとの結果（期待どおりならpass）
        """
        commands = self.orchestrator.commands()
        passed = 0
        for case in tqdm(
            self.manifest.cases, desc="Corpus", unit="case", disable=not self.show_progress
        ):
            report = self._run_case(case, commands)
            passed += report.passed
            yield report
        logger.info(f"Corpus finished: {passed}/{len(self.manifest.cases)} cases as expected")

    def _run_case(self, case: CorpusCase, commands: dict) -> Report:
        subject = f"{case.file}: {case.command} {self._describe(case.args)}".strip()
        if case.command not in commands:
            return self._failure(subject, "corpus.command", f"Unknown command {case.command}")
        path = str(self.directory / case.file)
        try:
            results: list[Union[Report, Verdict, SliceReport]] = commands[case.command](
                path, **case.args
            )
        except (SessionToolError, OSError, TypeError) as e:
            return self._failure(subject, "corpus.error", f"{type(e).__name__}: {e}")

        outcome = Outcome.combine([result.outcome for result in results])
        diagnostics: list[Diagnostic] = []
        if outcome != case.expect:
            diagnostics.append(
                Diagnostic(
                    code="corpus.outcome",
                    message="Check did not end as the manifest expects",
                    expected=case.expect.value,
                    found=outcome.value,
                )
            )
        if case.caveat:
            caveats = [r.caveat for r in results if isinstance(r, SliceReport)]
            if not any(caveats):
                diagnostics.append(
                    Diagnostic(code="corpus.caveat", message="Expected a caveat on the slices")
                )
        return Report(
            check="corpus",
            subject=subject,
            outcome=Outcome.FAIL if diagnostics else Outcome.PASS,
            diagnostics=diagnostics,
            details={"outcome": outcome.value},
        )

    @staticmethod
    def _describe(args: dict[str, Any]) -> str:
        return " ".join(f"{key}={value}" for key, value in args.items())

    @staticmethod
    def _failure(subject: str, code: str, message: str) -> Report:
        logger.warning(f"Corpus case failed to run: {subject}: {message}")
        return Report(
            check="corpus",
            subject=subject,
            outcome=Outcome.FAIL,
            diagnostics=[Diagnostic(code=code, message=message)],
        )
