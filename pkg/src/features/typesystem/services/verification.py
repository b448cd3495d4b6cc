"""型付けに基づく検査（ロールとの照合・主題簡約・一意性）"""

from typing import Optional

from ....shared.exceptions.errors import TypingError
from ....shared.logging.config import get_logger
from ...congruence.services.congruence import absorbing_congruent, proc_congruent
from ...parsing.services.printer import format_label, format_process
from ...projection.domain.models import Role
from ...projection.services.projection import participant_at, role_of
from ...reports.domain.models import Diagnostic, Outcome, Report
from ...semantics.domain.models import DEFAULT_BUDGET, ExplorationBudget
from ...semantics.services.checks import check_stimulation
from ...semantics.services.transitions import proc_transitions
from ...syntax.domain.process import (
    Accept,
    Action,
    Inaction,
    Invite,
    Process,
    Receive,
    Send,
    Silent,
    parallel,
)
from ...syntax.domain.system import TypeEnvironment
from ...syntax.services.names import actions, all_names, base_name
from ...syntax.services.sessions import sorted_participants
from ..domain.models import Typing
from .inference import DEFAULT_CANDIDATE_LIMIT, infer_candidates, infer_principal

logger = get_logger(__name__)


def _all_inaction(typing: Typing) -> bool:
    return all(isinstance(e.process, Inaction) for e in typing.channels.entries)


def check_against(
    env: TypeEnvironment,
    process: Process,
    expected: Role,
    limit: int = DEFAULT_CANDIDATE_LIMIT,
) -> Report:
    """
    プロセスが期待するロールで型付けされるかの検査

    主型付けの候補のうち、セッション型付けがロールと（重複吸収後に）合同で、
    チャネル型付けの項目が全て0であるものがあれば合格。

    Args:
        env: 型環境Γ
        process: 束縛名が付け替え済みのプロセス
        expected: 期待するロール A↾r
        limit: 型推論で保持する候補数の上限

    Returns:
        Report: 不合格なら推論エラーのクラス名またはRoleDisagreementの診断付き
    """
    subject = f"{expected.participant}: {format_process(process)}"
    role_text = format_process(expected.process)
    try:
        candidates = infer_candidates(env, process, limit)
    except TypingError as e:
        logger.info(f"Typing of {expected.participant} failed: {e}")
        return Report(
            check="typing",
            subject=subject,
            outcome=Outcome.FAIL,
            diagnostics=[
                Diagnostic(
                    code=type(e).__name__,
                    message=str(e),
                    subject=expected.participant,
                    expected=role_text,
                )
            ],
        )

    for candidate in candidates:
        if _all_inaction(candidate) and absorbing_congruent(candidate.session, expected.process):
            return Report(
                check="typing",
                subject=subject,
                outcome=Outcome.PASS,
                details={"typing": format_process(candidate.session)},
            )

    principal = candidates[0]
    leftover = principal.channels.ceil()
    message = f"Typing of {expected.participant} does not agree with the role"
    if not _all_inaction(principal):
        message += f"; channel typing {format_process(leftover)} is not empty"
    return Report(
        check="typing",
        subject=subject,
        outcome=Outcome.FAIL,
        diagnostics=[
            Diagnostic(
                code="RoleDisagreement",
                message=message,
                subject=expected.participant,
                expected=role_text,
                found=format_process(principal.session),
            )
        ],
        details={"candidates": len(candidates)},
    )


# ---------------------------------------------------------------------------
# 主題簡約
# ---------------------------------------------------------------------------


def _same_action(left: Action, right: Action) -> bool:
    if isinstance(left, Silent) or isinstance(right, Silent):
        return isinstance(left, Silent) and isinstance(right, Silent)
    return bool(left == right)


def _step_stimulates(
    source: Process, label: Action, target: Process, budget: ExplorationBudget
) -> Outcome:
    """source →label≻ target: ラベルの遷移先のどれかが target を刺激する"""
    result = proc_transitions(source, budget)
    outcomes = [
        check_stimulation(successor, target, budget).outcome
        for action, successor in result.transitions
        if _same_action(action, label)
    ]
    if Outcome.PASS in outcomes:
        return Outcome.PASS
    if Outcome.UNKNOWN in outcomes or result.truncated:
        return Outcome.UNKNOWN
    return Outcome.FAIL


def _fresh_tuple(
    before: Process, after: Process, channel: str
) -> Optional[tuple[str, ...]]:
    """確立で新しく作られた通信チャネル組（招待者の束縛子と元の名前で対応づける）"""
    created = all_names(after) - all_names(before)
    found: set[tuple[str, ...]] = set()
    for action in actions(before):
        if not isinstance(action, Invite) or action.channel != channel:
            continue
        mapped: list[str] = []
        for binder in action.channels:
            names = [n for n in created if base_name(n) == base_name(binder)]
            if len(names) != 1:
                break
            mapped.append(names[0])
        else:
            found.add(tuple(mapped))
    return found.pop() if len(found) == 1 else None


def _session_roles(
    env: TypeEnvironment, channel: str, tuple_: tuple[str, ...], indices: list[int]
) -> Process:
    binding = env.lookup(channel)
    assert binding is not None
    return parallel(
        *[
            role_of(binding.body, participant_at(binding.body, i), tuple_, binding.session)
            for i in indices
        ]
    )


def _reduction_clause(
    env: TypeEnvironment,
    process: Process,
    typing: Typing,
    action: Action,
    successor: Process,
    after: Typing,
    budget: ExplorationBudget,
) -> tuple[Outcome, str]:
    """一つの遷移について対応する節を検査する"""
    r, r_after = typing.session, after.session
    delta, delta_after = typing.channels.ceil(), after.channels.ceil()

    def stimulation(p: Process, q: Process) -> Outcome:
        return check_stimulation(p, q, budget).outcome

    if isinstance(action, (Send, Receive)):
        outcome = Outcome.combine(
            [stimulation(r, r_after), _step_stimulates(delta, action, delta_after, budget)]
        )
        return outcome, "communication"
    if isinstance(action, Invite):
        roles = _session_roles(env, action.channel, action.channels, [1])
        outcome = Outcome.combine(
            [
                _step_stimulates(r, action, r_after, budget),
                stimulation(parallel(roles, delta), delta_after),
            ]
        )
        return outcome, "invitation"
    if isinstance(action, Accept):
        roles = _session_roles(env, action.channel, action.channels, [action.index])
        outcome = Outcome.combine(
            [
                _step_stimulates(r, action, r_after, budget),
                stimulation(parallel(roles, delta), delta_after),
            ]
        )
        return outcome, "acceptance"

    assert isinstance(action, Silent)
    internal = Outcome.combine(
        [stimulation(r, r_after), _step_stimulates(delta, action, delta_after, budget)]
    )
    if internal == Outcome.PASS:
        return internal, "internal communication"
    cause = action.cause
    if cause is None or cause.kind != "sess" or cause.channel is None:
        return internal, "internal communication"
    binding = env.lookup(cause.channel)
    fresh = _fresh_tuple(process, successor, cause.channel)
    if binding is None or fresh is None:
        return Outcome.combine([internal, Outcome.UNKNOWN]), "establishment"
    count = len(sorted_participants(binding.body))
    roles = _session_roles(env, cause.channel, fresh, list(range(1, count + 1)))
    established = Outcome.combine(
        [
            _step_stimulates(r, action, r_after, budget),
            stimulation(parallel(roles, delta), delta_after),
        ]
    )
    if established == Outcome.PASS or internal == Outcome.FAIL:
        return established, "establishment"
    return Outcome.combine([internal, established]), "establishment"


def check_subject_reduction(
    env: TypeEnvironment, process: Process, budget: ExplorationBudget = DEFAULT_BUDGET
) -> Report:
    """
    型付け可能なプロセスの一歩遷移で型付けが期待どおりに変化するかの検査

    遷移先が型付け可能であることと、送受信・招待・受諾・内部遷移のそれぞれに
    対応する刺激関係を予算内で確かめる。

    Raises:
        TypingError: process自体が型付けできない場合
    """
    typing = infer_principal(env, process)
    result = proc_transitions(process, budget)
    diagnostics: list[Diagnostic] = []
    outcomes: list[Outcome] = [Outcome.UNKNOWN] if result.truncated else []
    for action, successor in result.transitions:
        label = format_label(action)
        try:
            after = infer_principal(env, successor)
        except TypingError as e:
            outcomes.append(Outcome.FAIL)
            diagnostics.append(
                Diagnostic(
                    code="subject-reduction.untypable",
                    message=f"Successor after {label} is not typable: {e}",
                    found=format_process(successor),
                )
            )
            continue
        outcome, clause = _reduction_clause(env, process, typing, action, successor, after, budget)
        outcomes.append(outcome)
        if outcome != Outcome.PASS:
            diagnostics.append(
                Diagnostic(
                    code=f"subject-reduction.{outcome.value}",
                    message=f"The {clause} clause for {label} does not hold"
                    if outcome == Outcome.FAIL
                    else f"The {clause} clause for {label} is undecided within budget",
                    expected=format_process(typing.session),
                    found=format_process(after.session),
                )
            )
    outcome = Outcome.combine(outcomes)
    logger.debug(f"Subject reduction of {format_process(process)}: {outcome.value}")
    return Report(
        check="subject-reduction",
        subject=format_process(process),
        outcome=outcome,
        diagnostics=diagnostics,
        details={"transitions": len(result.transitions), "budget": budget.describe()},
    )


def check_uniqueness(env: TypeEnvironment, process: Process) -> Report:
    """
    揃え方の優先順を逆にしても主型付けが合同になるかの検査

    Raises:
        TypingError: 型付けできない場合
    """
    forward = infer_principal(env, process)
    backward = infer_principal(env, process, reverse=True)
    diagnostics: list[Diagnostic] = []
    if not proc_congruent(forward.session, backward.session):
        diagnostics.append(
            Diagnostic(
                code="uniqueness.session",
                message="Session typings differ",
                expected=format_process(forward.session),
                found=format_process(backward.session),
            )
        )
    if not proc_congruent(forward.channels.ceil(), backward.channels.ceil()):
        diagnostics.append(
            Diagnostic(
                code="uniqueness.channels",
                message="Channel typings differ",
                expected=format_process(forward.channels.ceil()),
                found=format_process(backward.channels.ceil()),
            )
        )
    return Report(
        check="uniqueness",
        subject=format_process(process),
        outcome=Outcome.FAIL if diagnostics else Outcome.PASS,
        diagnostics=diagnostics,
    )
