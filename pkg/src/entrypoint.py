"""CLIエントリーポイント"""

import argparse
import json
import sys
from typing import NoReturn, Optional

from .features.batch.orchestrator import CheckOrchestrator
from .features.reports.services.rendering import (
    OUTPUT_FORMATS,
    overall_outcome,
    render,
    report_schema,
)
from .infrastructure.config.settings import Settings
from .shared.exceptions.errors import SessionToolError, UsageError
from .shared.logging.config import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_USAGE = 3


class _ArgumentParser(argparse.ArgumentParser):
    """引数の誤りを終了コード3で報告する"""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    """コマンドラインの定義"""
    parser = _ArgumentParser(
        prog="sesstool", description="二層マルチパーティセッション型の検査ツール"
    )

    parser.add_argument(
        "--format",
        choices=OUTPUT_FORMATS,
        help="レポートの出力形式（デフォルト: 設定値 text）",
    )
    parser.add_argument(
        "--budget",
        type=str,
        help="探索予算 'unfold,depth,states'（SESSTOOL_BUDGETより優先）",
    )
    parser.add_argument(
        "--env-file",
        type=str,
        default=".env",
        help="環境変数ファイルのパス（デフォルト: .env）",
    )
    parser.add_argument(
        "--log-level",
        type=str,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="ログレベル",
    )
    parser.add_argument(
        "--progress",
        action="store_true",
        help="探索の進捗バーを表示",
    )

    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    parse = commands.add_parser("parse", help="ファイルを解析して正規化した宣言を表示")
    parse.add_argument("file")

    wellformed = commands.add_parser("wellformed", help="整形式性と競合のなさを検査")
    wellformed.add_argument("file")
    target = wellformed.add_mutually_exclusive_group(required=True)
    target.add_argument("--session", help="検査するセッション名")
    target.add_argument("--all", action="store_true", help="宣言された全てのセッションを検査")

    project = commands.add_parser("project", help="セッションを参加者に射影")
    project.add_argument("file")
    project.add_argument("--session", required=True)
    project.add_argument("--role", required=True)

    infer = commands.add_parser("infer", help="プロセスの主型付けを推論")
    infer.add_argument("file")
    infer.add_argument("--process", required=True)
    infer.add_argument(
        "--env",
        dest="env",
        action="store_true",
        default=True,
        help="ファイルのchannel宣言を型環境として使う（既定）",
    )
    infer.add_argument(
        "--no-env",
        dest="env",
        action="store_false",
        help="空の型環境で推論する（--spec/--roleがあれば無視）",
    )
    infer.add_argument("--spec", help="照合する統合セッション")
    infer.add_argument("--role", help="照合する参加者")

    check = commands.add_parser("check", help="システムが統合セッションを実装しているか検査")
    check.add_argument("file")
    check.add_argument("--system", required=True)
    check.add_argument("--spec", required=True)

    slice_ = commands.add_parser("slice", help="スライスにより違反セッションを特定")
    slice_.add_argument("file")
    slice_.add_argument("--process", required=True)
    slice_.add_argument("--spec", required=True)
    slice_.add_argument("--role", required=True)

    privacy = commands.add_parser("privacy", help="通信チャネルのプライバシーを検査")
    privacy.add_argument("file")
    privacy.add_argument("--system", required=True)

    conform = commands.add_parser("conform", help="統合セッションへの適合性を検査")
    conform.add_argument("file")
    conform.add_argument("--system", required=True)
    conform.add_argument("--spec", required=True)

    corpus = commands.add_parser("corpus", help="コーパスの指定された検査を全て実行")
    corpus.add_argument("directory", nargs="?", default="corpus")

    commands.add_parser("schema", help="JSONレポートのスキーマを表示")

    return parser


def _dispatch(orchestrator: CheckOrchestrator, args: argparse.Namespace) -> list:
    if args.command == "parse":
        return orchestrator.run_parse(args.file)
    if args.command == "wellformed":
        return orchestrator.run_wellformed(args.file, args.session, args.all)
    if args.command == "project":
        return orchestrator.run_project(args.file, args.session, args.role)
    if args.command == "infer":
        return orchestrator.run_infer(args.file, args.process, args.env, args.spec, args.role)
    if args.command == "check":
        return orchestrator.run_check(args.file, args.system, args.spec)
    if args.command == "slice":
        return orchestrator.run_slice(args.file, args.process, args.spec, args.role)
    if args.command == "privacy":
        return orchestrator.run_privacy(args.file, args.system)
    if args.command == "conform":
        return orchestrator.run_conform(args.file, args.system, args.spec)
    return orchestrator.run_corpus(args.directory)


def main(argv: Optional[list[str]] = None) -> int:
    """
    メインエントリーポイント

    Returns:
        int: 終了コード（0: 合格, 1: 不合格, 2: 予算内で判定できず, 3: 引数・入力の誤り）
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"sesstool: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        # 設定を読み込み
        settings = Settings(_env_file=args.env_file)
        if args.log_level:
            settings.log_level = args.log_level
        if args.format:
            settings.output_format = args.format
        if args.progress:
            settings.show_progress = True

        setup_logging(settings.log_level)

        if args.command == "schema":
            print(json.dumps(report_schema(), ensure_ascii=False, indent=2))
            return 0

        orchestrator = CheckOrchestrator(settings, args.budget)
        logger.info(f"Running {args.command}")
        results = _dispatch(orchestrator, args)
        print(render(results, settings.output_format))
        outcome = overall_outcome(results)
        logger.info(f"{args.command} finished: {outcome.value}")
        return outcome.exit_code

    except KeyboardInterrupt:
        logger.warning("Interrupted by user")
        return 130  # SIGINT
    except (SessionToolError, OSError, ValueError) as e:
        logger.debug("Input error", exc_info=True)
        print(f"sesstool: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
