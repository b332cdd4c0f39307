"""Differential testing of two string functions by exhaustive enumeration."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import BudgetExceeded
from .machines import AMBIGUOUS, EvalOutcome, NOT_IN_DOMAIN, strip_endmarkers
from .nfa import enumerate_words
from .symbols import Alphabet, Word, display_word


@dataclass(frozen=True)
class DiffTestReport:
    left: str
    right: str
    alphabet: Alphabet
    max_len: int
    words_tested: int
    equal: bool
    mismatch_word: Optional[Word] = None
    left_outcome: Optional[EvalOutcome] = None
    right_outcome: Optional[EvalOutcome] = None
    elapsed: float = 0.0

    def __str__(self) -> str:
        if self.equal:
            return f"EQUAL words={self.words_tested} maxlen={self.max_len} elapsed={self.elapsed:.2f}s"
        word = display_word(self.mismatch_word) or "ε"
        return (
            f"MISMATCH word={word}"
            f" left={self.left_outcome} right={self.right_outcome}"
            f" words={self.words_tested} elapsed={self.elapsed:.2f}s"
        )

    def to_dict(self) -> dict:
        out = {
            "left": self.left,
            "right": self.right,
            "alphabet": list(self.alphabet.symbols),
            "maxLen": self.max_len,
            "wordsTested": self.words_tested,
            "verdict": "equal" if self.equal else "mismatch",
            "elapsed": round(self.elapsed, 6),
        }
        if not self.equal:
            out["word"] = display_word(self.mismatch_word)
            out["leftOutcome"] = str(self.left_outcome)
            out["rightOutcome"] = str(self.right_outcome)
        return out


def _comparison_key(outcome: EvalOutcome, strip: bool):
    if outcome.kind == NOT_IN_DOMAIN:
        return (NOT_IN_DOMAIN,)
    outs = outcome.outputs
    if strip:
        outs = tuple(strip_endmarkers(w) for w in outs)
    return (outcome.kind if outcome.kind == AMBIGUOUS else "value", tuple(sorted(set(outs))))


def run_difftest(
    left: Callable[[Word], EvalOutcome],
    right: Callable[[Word], EvalOutcome],
    alphabet: Alphabet,
    max_len: int = 10,
    strip: bool = False,
    left_name: str = "left",
    right_name: str = "right",
    word_budget: int = 10**7,
) -> DiffTestReport:
    """Compare outcomes on every word up to ``max_len``, shortest first.

    The first differing word (length-then-lexicographic order) is reported;
    unique outputs may be compared after endmarker stripping.
    """
    if len(alphabet) ** max_len > word_budget:
        raise BudgetExceeded(
            f"{len(alphabet)}^{max_len} words exceed the {word_budget} budget"
        )
    start = time.monotonic()
    tested = 0
    for w in enumerate_words(alphabet, max_len):
        tested += 1
        lo = left(w)
        ro = right(w)
        if _comparison_key(lo, strip) != _comparison_key(ro, strip):
            return DiffTestReport(
                left_name,
                right_name,
                alphabet,
                max_len,
                tested,
                False,
                w,
                lo,
                ro,
                time.monotonic() - start,
            )
    return DiffTestReport(
        left_name, right_name, alphabet, max_len, tested, True, elapsed=time.monotonic() - start
    )
