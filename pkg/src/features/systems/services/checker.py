"""
システムの検査

well-typedness（参加者・型環境・各コンポーネントの型検査）、通信チャネルの
プライバシー、統合セッションへの適合性を扱う。後の二つは有界探索による判定。
"""

from ....shared.exceptions.errors import SessionToolError, UnboundSessionError
from ....shared.logging.config import get_logger
from ...parsing.services.printer import format_label, format_process, format_session
from ...projection.services.projection import marks, project_integrating
from ...reports.domain.models import Diagnostic, Outcome, Report, Verdict
from ...semantics.domain.models import DEFAULT_BUDGET, ExplorationBudget
from ...semantics.services.correspondence import cause_translator, check_correspondence
from ...semantics.services.exploration import explore
from ...slicing.services.diagnosis import diagnose
from ...syntax.domain.process import (
    Accept,
    Hiding,
    Invite,
    Labelled,
    Parallel,
    Process,
    Receive,
    Send,
    parallel,
)
from ...syntax.domain.session import Session
from ...syntax.domain.system import SystemDef, TypeEnvironment
from ...syntax.services.names import actions, free_channels
from ...syntax.services.sessions import pid
from ...typesystem.services.inference import DEFAULT_CANDIDATE_LIMIT
from ...typesystem.services.verification import check_against

logger = get_logger(__name__)


def _environment_diagnostics(
    spec: Session, env: TypeEnvironment, name: str
) -> list[Diagnostic]:
    try:
        relation = marks(spec, env, name)
    except UnboundSessionError as e:
        return [Diagnostic(code="system.environment", message=str(e), subject=name)]
    diagnostics: list[Diagnostic] = []
    marking = {channel for channel, _ in relation}
    for channel, session in relation:
        binding = env.lookup(channel)
        if binding is None or binding.session != session:
            diagnostics.append(
                Diagnostic(
                    code="system.environment",
                    message=f"Channel {channel} marks {session} but is not bound to it",
                    subject=channel,
                )
            )
    for channel in sorted(env.channels - marking):
        diagnostics.append(
            Diagnostic(
                code="system.environment",
                message=f"Channel {channel} does not mark any establishment of {name}",
                subject=channel,
            )
        )
    if env.variables:
        diagnostics.append(
            Diagnostic(
                code="system.environment",
                message="Type environment must not bind process variables",
                subject=", ".join(sorted(env.variables)),
            )
        )
    return diagnostics


def well_typed_system(
    system: SystemDef,
    spec: Session,
    env: TypeEnvironment,
    name: str = "spec",
    budget: ExplorationBudget = DEFAULT_BUDGET,
    limit: int = DEFAULT_CANDIDATE_LIMIT,
) -> Report:
    """
    システムが統合セッションを実装しているかの検査

    参加者の集合がpid(A)と一致し、Γがちょうど確立を印付けるチャネルを本体に束縛し、
    全てのコンポーネントが対応するロールで型付けされれば合格。

    Args:
        system: システム
        spec: 統合セッション
        env: 型環境Γ
        name: 統合セッションの宣言名
        budget: 射影に使う探索予算
        limit: 型検査で保持する候補数の上限

    Returns:
        Report: 不合格のコンポーネントにはスライスによる診断をdetailsに添付
    """
    subject = f"{system.name} : {name}"
    diagnostics: list[Diagnostic] = []
    details: dict = {}

    expected = pid(spec)
    actual = set(system.participants)
    if expected != actual:
        missing = sorted(expected - actual)
        extra = sorted(actual - expected)
        diagnostics.append(
            Diagnostic(
                code="system.participants",
                message=f"Participants differ from {name} "
                f"(missing: {', '.join(missing) or '-'}, extra: {', '.join(extra) or '-'})",
                expected=", ".join(sorted(expected)),
                found=", ".join(sorted(actual)),
            )
        )
    diagnostics.extend(_environment_diagnostics(spec, env, name))
    if diagnostics:
        return Report(
            check="well-typed", subject=subject, outcome=Outcome.FAIL, diagnostics=diagnostics
        )

    slices: dict[str, dict] = {}
    for participant, process in system.components:
        role = project_integrating(spec, participant, env, name, budget)
        report = check_against(env, process, role, limit)
        if report.passed:
            logger.debug(f"{participant} is typed by its role in {name}")
            continue
        for diagnostic in report.diagnostics:
            diagnostics.append(diagnostic.model_copy(update={"subject": participant}))
        try:
            report_slices = diagnose(env, process, spec, participant, name, budget, limit)
            slices[participant] = report_slices.model_dump(mode="json")
        except SessionToolError as e:
            logger.info(f"Slices of {participant} are not available: {e}")
    if slices:
        details["slices"] = slices
    outcome = Outcome.FAIL if diagnostics else Outcome.PASS
    logger.info(f"System {system.name} against {name}: {outcome.value}")
    return Report(
        check="well-typed",
        subject=subject,
        outcome=outcome,
        diagnostics=diagnostics,
        details=details,
    )


# ---------------------------------------------------------------------------
# チャネルのプライバシー
# ---------------------------------------------------------------------------


def _labelled_components(state: Process) -> dict[str, Process]:
    """状態を参加者ごとのプロセスに分ける（外側の隠蔽は取り除く）"""
    components: dict[str, list[Process]] = {}
    stack = [state]
    while stack:
        node = stack.pop()
        if isinstance(node, Hiding):
            stack.append(node.body)
        elif isinstance(node, Parallel):
            stack.extend([node.right, node.left])
        elif isinstance(node, Labelled):
            components.setdefault(node.label, []).append(node.body)
    return {label: parallel(*bodies) for label, bodies in components.items()}


def _privacy_violation(state: Process, session_channels: set[str]) -> str | None:
    components = _labelled_components(state)
    free = {label: free_channels(process) for label, process in components.items()}
    for label, process in components.items():
        for action in actions(process):
            if not isinstance(action, (Send, Receive)):
                continue
            channel = action.channel
            if channel in session_channels or channel not in free[label]:
                continue
            holders = sorted(
                other for other in components if other != label and channel in free[other]
            )
            # 相手が先に進んで取り残された接頭辞（競りに負けた買い手が競りのチャネルで
            # 待ち続ける場合）は holders が空になる。違反は他の二者以上と共有したときだけ
            if len(holders) > 1:
                return (
                    f"Channel {channel} of {label} is shared with "
                    f"{len(holders)} other components ({', '.join(holders)})"
                )
    return None


def check_channel_privacy(
    system: SystemDef,
    budget: ExplorationBudget = DEFAULT_BUDGET,
    show_progress: bool = False,
) -> Verdict:
    """
    通信チャネルのプライバシーの有界検査

    τで到達できる各状態で、コンポーネントの通信接頭辞の主語チャネルを自由に持つ
    他のコンポーネントが高々一つであることを確かめる。セッションチャネルは対象外。
    """
    root = system.to_process()
    session_channels = {
        a.channel for a in actions(root) if isinstance(a, (Invite, Accept))
    }
    exploration = explore(root, budget, silent_only=True, show_progress=show_progress)
    common = {
        "check": "channel-privacy",
        "subject": system.name,
        "budget": budget.describe(),
        "states_explored": exploration.state_count,
    }
    for node in exploration.graph.nodes:
        violation = _privacy_violation(exploration.term(node), session_channels)
        if violation is not None:
            logger.info(f"Channel privacy of {system.name} fails: {violation}")
            return Verdict(
                outcome=Outcome.FAIL,
                message=f"{violation} in state {format_process(exploration.term(node))}",
                trace=[format_label(label) for label in exploration.trace_to(node)],
                **common,
            )
    if exploration.truncated:
        return Verdict(outcome=Outcome.UNKNOWN, message="No violation within budget", **common)
    return Verdict(outcome=Outcome.PASS, message="Communicating channels are private", **common)


def check_conformance(
    system: SystemDef,
    spec: Session,
    env: TypeEnvironment,
    budget: ExplorationBudget = DEFAULT_BUDGET,
    show_progress: bool = False,
) -> Verdict:
    """
    システムのτ遷移が統合セッションの遷移で模倣されるかの有界検査

    通信は関与した参加者とメッセージから p,q:v に、確立は招待順の参加者とΓの
    束縛から p̃:B に翻訳する。
    """
    verdict = check_correspondence(
        system.to_process(),
        spec,
        cause_translator(env),
        "conformance",
        budget,
        show_progress=show_progress,
    )
    logger.info(
        f"Conformance of {system.name} to {format_session(spec)}: {verdict.outcome.value}"
    )
    return verdict.model_copy(update={"subject": system.name})
