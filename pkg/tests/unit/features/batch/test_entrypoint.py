"""CLIエントリーポイントのテスト"""

import json

import pytest
from pytest_mock import MockerFixture

from src.entrypoint import EXIT_USAGE, main
from src.features.batch.orchestrator import CheckOrchestrator
from tests.conftest import CORPUS_DIR, FIXTURES_DIR

QUOTE = str(FIXTURES_DIR / "quote.sess")
INTERLEAVING = str(FIXTURES_DIR / "interleaving.sess")
PROP3 = str(CORPUS_DIR / "prop3.sess")


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch: pytest.MonkeyPatch, tmp_path) -> None:
    """カレントディレクトリの.envと実行環境のSESSTOOL_*変数を使わない"""
    monkeypatch.chdir(tmp_path)
    for name in ("SESSTOOL_BUDGET", "SESSTOOL_BUDGET_PRESET", "SESSTOOL_OUTPUT_FORMAT"):
        monkeypatch.delenv(name, raising=False)


@pytest.mark.parametrize(
    "argv,code",
    [
        (["parse", QUOTE], 0),
        (["wellformed", QUOTE, "--all"], 0),
        (["check", QUOTE, "--system", "QuoteSys", "--spec", "QuoteReq"], 0),
        (["privacy", QUOTE, "--system", "Gossip"], 1),
        (["infer", INTERLEAVING, "--process", "Q1"], 1),
        (["infer", INTERLEAVING, "--process", "Q2", "--spec", "A0", "--role", "q"], 0),
        (["infer", PROP3, "--process", "P1", "--spec", "A0", "--role", "p"], 1),
        (["slice", PROP3, "--process", "P1", "--spec", "A0", "--role", "p"], 0),
        (["infer", QUOTE, "--process", "Manufacturer"], 0),
        (["infer", INTERLEAVING, "--process", "Q2", "--no-env"], 1),
        (["--budget", "1,1,1", "privacy", QUOTE, "--system", "QuoteSys"], 2),
    ],
)
def test_exit_codes(argv: list[str], code: int) -> None:
    """合格0、不合格1、予算内で判定できず2"""
    assert main(argv) == code


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["wellformed", QUOTE],
        ["wellformed", QUOTE, "--all", "--session", "Negotn"],
        ["--format", "xml", "parse", QUOTE],
        ["--budget", "1,2", "parse", QUOTE],
        ["parse", "missing.sess"],
        ["project", QUOTE, "--session", "QuoteReq", "--role", "W"],
        ["check", QUOTE, "--system", "Nobody", "--spec", "QuoteReq"],
    ],
)
def test_usage_errors(argv: list[str], capsys: pytest.CaptureFixture[str]) -> None:
    """引数や入力の誤りは終了コード3"""
    assert main(argv) == EXIT_USAGE
    assert "sesstool:" in capsys.readouterr().err


def test_json_output(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["--format", "json", "privacy", QUOTE, "--system", "Gossip"]) == 1

    [verdict] = json.loads(capsys.readouterr().out)
    assert verdict["kind"] == "verdict"
    assert verdict["check"] == "channel-privacy"
    assert verdict["outcome"] == "fail"


def test_text_output(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["project", QUOTE, "--session", "Negotn", "--role", "1"]) == 0
    assert "[PASS] projection: Negotn onto 1" in capsys.readouterr().out


def test_env_file(tmp_path, capsys: pytest.CaptureFixture[str]) -> None:
    """--env-fileの設定が使われる"""
    env_file = tmp_path / "custom.env"
    env_file.write_text("SESSTOOL_OUTPUT_FORMAT=json\n", encoding="utf-8")

    assert main(["--env-file", str(env_file), "parse", QUOTE]) == 0
    assert json.loads(capsys.readouterr().out)[0]["kind"] == "report"


def test_schema(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["schema"]) == 0
    assert json.loads(capsys.readouterr().out)["type"] == "array"


def test_dispatch_arguments(mocker: MockerFixture) -> None:
    """サブコマンドの引数がそのまま渡される"""
    spy = mocker.spy(CheckOrchestrator, "run_slice")

    assert main(["slice", INTERLEAVING, "--process", "Q1", "--spec", "A0", "--role", "q"]) == 0
    spy.assert_called_once_with(mocker.ANY, INTERLEAVING, "Q1", "A0", "q")


def test_interrupt(mocker: MockerFixture) -> None:
    mocker.patch.object(CheckOrchestrator, "run_parse", side_effect=KeyboardInterrupt)
    assert main(["parse", QUOTE]) == 130


def test_infer_uses_file_environment(mocker: MockerFixture) -> None:
    """inferは既定でファイルの型環境を使い、--no-envで空にする"""
    spy = mocker.spy(CheckOrchestrator, "run_infer")

    assert main(["infer", QUOTE, "--process", "Manufacturer"]) == 0
    assert main(["infer", QUOTE, "--process", "Manufacturer", "--no-env"]) == 1
    assert [c.args[3] for c in spy.call_args_list] == [True, False]
