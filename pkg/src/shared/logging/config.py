"""ロギング設定"""

import logging
import sys
from typing import Optional, TextIO

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# 既定で WARNING 以上に抑えるライブラリ
QUIET_LIBRARIES = ("lark", "networkx")

# setup_logging が追加したハンドラー
_handler: Optional[logging.Handler] = None


def setup_logging(level: str = "INFO", stream: Optional[TextIO] = None) -> None:
    """
    ルートロガーにハンドラーを一つだけ設定

    レポートは標準出力に書くので、ログは既定で標準エラー出力へ流す。
    再度呼ばれた場合は前回のハンドラーを差し替える（CLIを同一プロセスで繰り返し起動するため）。

    Args:
        level: ログレベル (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        stream: 出力先（省略時は呼び出し時点の sys.stderr）
    """
    global _handler

    log_level = getattr(logging, level.upper(), logging.INFO)
    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)

    if _handler is not None:
        root_logger.removeHandler(_handler)

    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setLevel(log_level)
    handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
    root_logger.addHandler(handler)
    _handler = handler

    for name in QUIET_LIBRARIES:
        logging.getLogger(name).setLevel(max(log_level, logging.WARNING))

    logging.getLogger(__name__).debug(f"Logging configured with level: {level}")


def get_logger(name: str) -> logging.Logger:
    """
    指定名のロガーを取得

    Args:
        name: ロガー名（通常は__name__を指定）

    Returns:
        ロガーインスタンス
    """
    return logging.getLogger(name)
