"""カスタム例外定義"""

from typing import Any, Optional


class SessionToolError(Exception):
    """セッションツール基底例外"""

    pass


# ---------------------------------------------------------------------------
# 構文・宣言
# ---------------------------------------------------------------------------


class SurfaceSyntaxError(SessionToolError):
    """ソースファイルの構文エラー（行・列・期待トークン付き）"""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        expected: Optional[list[str]] = None,
    ) -> None:
        self.line = line
        self.column = column
        self.expected = sorted(expected or [])
        location = f"{line}:{column}: " if line is not None else ""
        hint = f" (expected: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{location}{message}{hint}")


class DuplicateDeclarationError(SessionToolError):
    """同じ種類の宣言名が重複している"""

    pass


class UnknownSessionNameError(SessionToolError):
    """宣言されていないセッション名を参照した"""

    pass


class SessionKindError(SessionToolError):
    """通信セッション・統合セッションの構文制約違反"""

    pass


# ---------------------------------------------------------------------------
# 名前・探索
# ---------------------------------------------------------------------------


class CaptureRiskError(SessionToolError):
    """置換先の名前が束縛されており、捕獲の危険がある"""

    pass


class BudgetExceededError(SessionToolError):
    """探索予算を使い切った（部分結果付き）"""

    def __init__(self, message: str, partial: Any = None) -> None:
        self.partial = partial
        super().__init__(message)


class UnsupportedOperatorError(SessionToolError):
    """スライスできない演算子（隠蔽・ラベル）を含む"""

    def __init__(self, operator: str) -> None:
        self.operator = operator
        super().__init__(f"Unsupported operator in sliced process: {operator}")


# ---------------------------------------------------------------------------
# 射影
# ---------------------------------------------------------------------------


class IllegalSubstitutionError(SessionToolError):
    """チャネル置換後のメッセージフローが決定的でない"""

    def __init__(self, message: str, trace: Optional[list[str]] = None) -> None:
        self.trace = trace or []
        super().__init__(message)


class UnboundSessionError(SessionToolError):
    """確立されるセッションの本体が環境に束縛されていない"""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"Session is not bound in the environment: {name}")


# ---------------------------------------------------------------------------
# 型付け
# ---------------------------------------------------------------------------


class TypingError(SessionToolError):
    """型付けエラー基底"""

    pass


class UnboundSessionChannelError(TypingError):
    """セッションチャネルが型環境に存在しない"""

    def __init__(self, channel: str) -> None:
        self.channel = channel
        super().__init__(f"Session channel is not bound in the environment: {channel}")


class RoleMismatchError(TypingError):
    """チャネル型付けの先頭エントリがロールと一致しない"""

    def __init__(self, channel: str, expected: str, found: str) -> None:
        self.channel = channel
        self.expected = expected
        self.found = found
        super().__init__(f"Role mismatch on {channel}: expected {expected}, found {found}")


class ArityMismatchError(TypingError):
    """チャネル組の長さや参加者番号がセッションと合わない"""

    pass


class VariableSplitError(TypingError):
    """再帰変数が複数の型付け位置に分かれている"""

    def __init__(self, variable: str) -> None:
        self.variable = variable
        super().__init__(f"Recursion variable {variable} is used in more than one typing position")


class NotTypableError(TypingError):
    """型付け不能"""

    def __init__(self, reason: str) -> None:
        self.reason = reason
        super().__init__(reason)


# ---------------------------------------------------------------------------
# その他
# ---------------------------------------------------------------------------


class ConfigurationError(SessionToolError):
    """設定エラー"""

    pass


class ValidationError(SessionToolError):
    """バリデーションエラー"""

    pass


class UsageError(SessionToolError):
    """コマンドライン引数の誤り"""

    pass
