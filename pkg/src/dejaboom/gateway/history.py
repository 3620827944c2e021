"""Rolling game-history window with summarization support.

Token counts use a pluggable estimator (default: characters / 4). When a
window crosses the high-water mark of its budget, the oldest turns are
folded into a single summary turn while the newest tail stays verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

HIGH_WATER_RATIO = 0.8
VERBATIM_TAIL = 10
SUMMARY_SPEAKER = "summary"


def chars_over_four(text: str) -> int:
    return max(1, len(text) // 4)


@dataclass(frozen=True)
class Turn:
    speaker: str
    text: str
    step: int
    day: int


@dataclass
class HistoryWindow:
    turns: list[Turn] = field(default_factory=list)
    estimator: Callable[[str], int] = chars_over_four

    def append(self, speaker: str, text: str, step: int, day: int) -> None:
        self.turns.append(Turn(speaker, text, step, day))

    def token_estimate(self) -> int:
        return sum(self.estimator(turn.text) for turn in self.turns)

    def needs_summary(self, budget: int) -> bool:
        return self.token_estimate() > budget * HIGH_WATER_RATIO

    def verbatim_tail(self, k: int = VERBATIM_TAIL) -> list[Turn]:
        body = [t for t in self.turns if t.speaker != SUMMARY_SPEAKER]
        return body[-k:]

    def copy(self) -> "HistoryWindow":
        return HistoryWindow(turns=list(self.turns), estimator=self.estimator)


def compress(
    window: HistoryWindow,
    budget: int,
    summary_text: str,
    tail: int = VERBATIM_TAIL,
) -> HistoryWindow:
    """Replace everything but the newest `tail` turns with one summary turn.

    The result is guaranteed under the budget: the summary text is cut
    first, and only if the verbatim tail alone overflows the budget is the
    tail itself shortened (a pathological budget; documented trade-off).
    """
    if not window.needs_summary(budget):
        return window
    kept = window.verbatim_tail(tail)
    dropped = len(window.turns) - len(kept)
    if dropped <= 0:
        kept_window = HistoryWindow(turns=list(kept), estimator=window.estimator)
        return _fit_tail(kept_window, budget)

    first_kept = kept[0] if kept else None
    summary_day = first_kept.day if first_kept else (window.turns[-1].day if window.turns else 1)
    out = HistoryWindow(
        turns=[Turn(SUMMARY_SPEAKER, summary_text, 0, summary_day), *kept],
        estimator=window.estimator,
    )
    while out.token_estimate() > budget and len(out.turns[0].text) > 8:
        shortened = out.turns[0].text[: max(8, len(out.turns[0].text) // 2)]
        out.turns[0] = Turn(SUMMARY_SPEAKER, shortened, 0, summary_day)
    if out.token_estimate() > budget:
        out.turns = out.turns[:1] + _fit_tail(
            HistoryWindow(turns=out.turns[1:], estimator=window.estimator), budget - window.estimator(out.turns[0].text)
        ).turns
    return out


def _fit_tail(window: HistoryWindow, budget: int) -> HistoryWindow:
    turns = list(window.turns)
    while turns and sum(window.estimator(t.text) for t in turns) > budget:
        turns.pop(0)
    return HistoryWindow(turns=turns, estimator=window.estimator)


def digest_text(window: HistoryWindow) -> str:
    """Deterministic plain-text digest of the turns about to be dropped."""
    kept = set(id(t) for t in window.verbatim_tail())
    dropped = [t for t in window.turns if id(t) not in kept and t.speaker != SUMMARY_SPEAKER]
    if not dropped:
        return "Nothing notable happened earlier."
    days = sorted({t.day for t in dropped})
    speakers = sorted({t.speaker for t in dropped if t.speaker not in ("player",)})
    parts = [f"Earlier ({len(dropped)} turns over day(s) {', '.join(map(str, days))})"]
    if speakers:
        parts.append("voices heard: " + ", ".join(speakers))
    first_player = next((t.text for t in dropped if t.speaker == "player"), None)
    if first_player:
        parts.append(f'it began with "{first_player}"')
    return "; ".join(parts) + "."
