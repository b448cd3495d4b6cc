"""共通フィクスチャ"""

from pathlib import Path
from typing import Callable

import pytest

from src.features.parsing.domain.models import SourceFile
from src.features.parsing.services.parser import parse
from src.features.syntax.domain.process import Process
from src.features.syntax.domain.session import Session

ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = ROOT / "corpus"
FIXTURES_DIR = Path(__file__).resolve().parent / "fixtures"


def parse_process(text: str) -> Process:
    """一つのプロセス式を解析する（束縛名は付け替え済み）"""
    return parse(f"process P = {text}").process("P")


def parse_session(text: str, declarations: str = "") -> Session:
    """一つのセッション式を解析する（確立の本体はdeclarationsで宣言する）"""
    return parse(f"{declarations}\nsession S = {text}").session("S").body


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    """コーパスディレクトリ"""
    return CORPUS_DIR


@pytest.fixture
def process_of() -> Callable[[str], Process]:
    return parse_process


@pytest.fixture
def session_of() -> Callable[..., Session]:
    return parse_session


@pytest.fixture(scope="session")
def quote_source() -> SourceFile:
    """見積依頼のソースファイル"""
    return parse((FIXTURES_DIR / "quote.sess").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def interleaving_source() -> SourceFile:
    """交互に進む二つのセッションのソースファイル"""
    return parse((FIXTURES_DIR / "interleaving.sess").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def protocol_source() -> SourceFile:
    """5者の取引プロトコルのソースファイル"""
    return parse((CORPUS_DIR / "protocol.sess").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def client_server_source() -> SourceFile:
    """クライアント・サーバーのソースファイル"""
    return parse((CORPUS_DIR / "client_server.sess").read_text(encoding="utf-8"))
