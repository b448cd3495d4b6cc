"""レポートの出力（テキスト・JSON）"""

import json
from typing import Any, Sequence, Union

from pydantic.json_schema import models_json_schema

from ..domain.models import Outcome, Report, SliceReport, Verdict

Result = Union[Report, Verdict, SliceReport]

OUTPUT_FORMATS = ("text", "json")


def overall_outcome(results: Sequence[Result]) -> Outcome:
    """全ての結果をまとめた結果"""
    return Outcome.combine([result.outcome for result in results])


def _detail_lines(details: dict[str, Any]) -> list[str]:
    lines: list[str] = []
    for key, value in details.items():
        if isinstance(value, (dict, list)):
            lines.append(f"  {key}:")
            text = json.dumps(value, ensure_ascii=False, indent=2)
            lines.extend(f"    {line}" for line in text.splitlines())
        else:
            lines.append(f"  {key}: {value}")
    return lines


def _report_text(report: Report) -> list[str]:
    lines = [f"[{report.outcome.value.upper()}] {report.check}: {report.subject}"]
    for diagnostic in report.diagnostics:
        where = f" at {diagnostic.path}" if diagnostic.path else ""
        who = f" ({diagnostic.subject})" if diagnostic.subject else ""
        lines.append(f"  - {diagnostic.code}{who}{where}: {diagnostic.message}")
        if diagnostic.expected is not None:
            lines.append(f"      expected: {diagnostic.expected}")
        if diagnostic.found is not None:
            lines.append(f"      found:    {diagnostic.found}")
    return lines + _detail_lines(report.details)


def _verdict_text(verdict: Verdict) -> list[str]:
    lines = [
        f"[{verdict.outcome.value.upper()}] {verdict.check}: {verdict.subject}",
        f"  {verdict.message}",
        f"  budget: {verdict.budget}, states explored: {verdict.states_explored}",
    ]
    if verdict.trace:
        lines.append("  trace:")
        lines.extend(f"    {step}" for step in verdict.trace)
    return lines


def _slice_text(report: SliceReport) -> list[str]:
    lines = [f"[{report.outcome.value.upper()}] slice: {report.role} in {report.spec}"]
    for entry in report.entries:
        if entry.channel is None:
            where = "main"
        else:
            where = f"{entry.channel}[{entry.index}]({', '.join(entry.channels)})"
        lines.append(f"  {entry.outcome.value:<7} {entry.session} {where}: {entry.slice}")
        if entry.mismatch:
            lines.append(f"          {entry.mismatch}")
    if report.caveat:
        lines.append(f"  note: {report.caveat}")
    return lines


def render_text(results: Sequence[Result]) -> str:
    """人が読むためのテキスト"""
    blocks: list[str] = []
    for result in results:
        if isinstance(result, Report):
            lines = _report_text(result)
        elif isinstance(result, Verdict):
            lines = _verdict_text(result)
        else:
            lines = _slice_text(result)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def render_json(results: Sequence[Result]) -> str:
    """
    機械可読なJSON

    結果ごとに "kind"（report, verdict, slices）を付けた配列を出力する。
    """
    payload = []
    for result in results:
        kind = (
            "report"
            if isinstance(result, Report)
            else "verdict" if isinstance(result, Verdict) else "slices"
        )
        payload.append({"kind": kind, **result.model_dump(mode="json")})
    return json.dumps(payload, ensure_ascii=False, indent=2)


def render(results: Sequence[Result], output_format: str = "text") -> str:
    """
    出力形式に応じて描画する

    Raises:
        ValueError: 未対応の出力形式
    """
    if output_format == "json":
        return render_json(results)
    if output_format == "text":
        return render_text(results)
    raise ValueError(f"Unsupported output format: {output_format}")


def report_schema() -> dict[str, Any]:
    """JSON出力の各要素のスキーマ（"kind"で種類を区別する）"""
    _, schema = models_json_schema(
        [(Report, "serialization"), (Verdict, "serialization"), (SliceReport, "serialization")],
        title="sesstool report stream",
    )
    kinds = {"Report": "report", "Verdict": "verdict", "SliceReport": "slices"}
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": schema["title"],
        "type": "array",
        "items": {
            "oneOf": [
                {
                    "allOf": [{"$ref": f"#/$defs/{model}"}],
                    "properties": {"kind": {"const": kind}},
                    "required": ["kind"],
                }
                for model, kind in kinds.items()
            ]
        },
        "$defs": schema["$defs"],
    }
