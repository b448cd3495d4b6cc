"""スライスと射影の比較による違反セッションの特定"""

from ....shared.exceptions.errors import UnboundSessionChannelError
from ....shared.logging.config import get_logger
from ...congruence.services.congruence import absorb_duplicates, absorbing_congruent
from ...parsing.services.printer import format_process
from ...projection.services.projection import participant_at, project_integrating, role_of
from ...reports.domain.models import Outcome, SliceEntry, SliceReport
from ...semantics.domain.models import DEFAULT_BUDGET, ExplorationBudget
from ...syntax.domain.process import Accept, Invite, Process
from ...syntax.domain.session import Session
from ...syntax.domain.system import TypeEnvironment
from ...syntax.services.names import actions
from ...typesystem.services.inference import DEFAULT_CANDIDATE_LIMIT
from ...typesystem.services.verification import check_against
from .slicing import channel_slice, main_slice

logger = get_logger(__name__)

UNTYPABLE_CAVEAT = "slices consistent but untypable"


def _compare(found: Process, expected: Process) -> tuple[Outcome, str | None]:
    if absorbing_congruent(found, expected):
        return Outcome.PASS, None
    return Outcome.FAIL, (
        f"expected {format_process(absorb_duplicates(expected))}, "
        f"found {format_process(absorb_duplicates(found))}"
    )


def diagnose(
    env: TypeEnvironment,
    process: Process,
    spec: Session,
    participant: str,
    name: str = "spec",
    budget: ExplorationBudget = DEFAULT_BUDGET,
    limit: int = DEFAULT_CANDIDATE_LIMIT,
) -> SliceReport:
    """
    スライスごとに期待するロールと比較し、違反しているセッションを特定する

    主スライスを A↾r と、招待 ā(c̃) のスライスを B↾1⟨c̃⟩ と、受諾 a_[k](c̃) の
    スライスを B↾k⟨c̃⟩ と比較する。全て一致しても型付け可能とは限らないので、
    その場合は型検査の結果を注記に残す。

    Args:
        env: 型環境Γ
        process: 束縛名が付け替え済みで、隠蔽とラベルを含まないプロセス
        spec: 統合セッション
        participant: 参加者名 r
        name: 統合セッションの宣言名
        budget: 射影に使う探索予算
        limit: 型検査で保持する候補数の上限

    Returns:
        SliceReport: 主スライスと各セッション接頭辞の出現ごとの比較結果

    Raises:
        UnsupportedOperatorError: 隠蔽またはラベルを含む場合
        UnboundSessionChannelError: セッションチャネルがΓで束縛されていない場合
    """
    expected_main = project_integrating(spec, participant, env, name, budget).process
    found_main = main_slice(process)
    outcome, mismatch = _compare(found_main, expected_main)
    entries = [
        SliceEntry(
            session=name,
            slice=format_process(found_main),
            expected=format_process(expected_main),
            outcome=outcome,
            mismatch=mismatch,
        )
    ]

    for action in actions(process):
        if not isinstance(action, (Invite, Accept)):
            continue
        binding = env.lookup(action.channel)
        if binding is None:
            raise UnboundSessionChannelError(action.channel)
        index = 1 if isinstance(action, Invite) else action.index
        expected = role_of(
            binding.body,
            participant_at(binding.body, index),
            action.channels,
            binding.session,
            budget,
        )
        found = channel_slice(process, action.channels)
        outcome, mismatch = _compare(found, expected)
        entries.append(
            SliceEntry(
                session=binding.session,
                channel=action.channel,
                channels=list(action.channels),
                index=index,
                slice=format_process(found),
                expected=format_process(expected),
                outcome=outcome,
                mismatch=mismatch,
            )
        )

    overall = Outcome.combine([entry.outcome for entry in entries])
    caveat = None
    if overall == Outcome.PASS:
        role = project_integrating(spec, participant, env, name, budget)
        if not check_against(env, process, role, limit).passed:
            caveat = UNTYPABLE_CAVEAT
    flagged = sorted({entry.session for entry in entries if entry.outcome != Outcome.PASS})
    if flagged:
        logger.info(f"Slices of {participant} disagree with: {', '.join(flagged)}")
    return SliceReport(
        process=format_process(process),
        spec=name,
        role=participant,
        outcome=overall,
        entries=entries,
        caveat=caveat,
    )
