"""Tokenization and smoothed sentence/corpus BLEU.

Scores are used both for corpus quality checks and as the similarity signal
for translation-based sentence alignment, so the sentence-level score is
floored (epsilon smoothing) instead of collapsing to 0 when an n-gram order
has no matches.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

_EN_TOKEN = re.compile(r"\w+(?:[-'’]\w+)*|[^\w\s]")
_ZH_TOKEN = re.compile(r"[A-Za-z0-9]+|[^\sA-Za-z0-9]")


def tokenize(text: str, lang: str = "en") -> list[str]:
    """Split text into scoring tokens.

    ``zh``: one token per character, with contiguous Latin/digit runs kept
    whole. Other languages: whitespace split with punctuation split off as
    separate tokens.
    """
    pattern = _ZH_TOKEN if lang == "zh" else _EN_TOKEN
    return pattern.findall(text)


@dataclass(frozen=True)
class BleuConfig:
    n_max: int = 2
    epsilon: float = 0.01
    use_brevity_penalty: bool = True

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max: must be >= 1")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon: must be in (0, 1)")


def ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


@dataclass(frozen=True)
class NgramProfile:
    """Token sequence with its n-gram counts for orders 1..n_max."""

    tokens: tuple[str, ...]
    counts: tuple[Counter, ...]

    @classmethod
    def build(cls, tokens: Sequence[str], n_max: int) -> "NgramProfile":
        tokens = tuple(tokens)
        return cls(tokens, tuple(ngram_counts(tokens, n) for n in range(1, n_max + 1)))


def _order_stats(hyp: Sequence[str], ref: Sequence[str], n: int) -> tuple[int, int]:
    """(clipped matches, hypothesis n-gram count) for one order."""
    hyp_counts = ngram_counts(hyp, n)
    ref_counts = ngram_counts(ref, n)
    matches = sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
    return matches, max(len(hyp) - n + 1, 0)


def _combine(precisions: list[float], bp: float) -> float:
    log_sum = sum(math.log(p) for p in precisions)
    return bp * math.exp(log_sum / len(precisions))


def _brevity_penalty(hyp_len: int, ref_len: int, cfg: BleuConfig) -> float:
    if not cfg.use_brevity_penalty or hyp_len == 0:
        return 1.0
    return min(1.0, math.exp(1.0 - ref_len / hyp_len))


def sentence_bleu(
    hyp_tokens: Sequence[str], ref_tokens: Sequence[str], cfg: BleuConfig = BleuConfig()
) -> float:
    """Smoothed sentence-level BLEU in [0, 1].

    Geometric mean of modified n-gram precisions for n = 1..n_max (orders the
    hypothesis is too short to populate are skipped), where an order with
    zero matches contributes epsilon instead; multiplied by the brevity
    penalty min(1, e^(1 - |ref|/|hyp|)). Empty hypotheses score 0.
    """
    if not hyp_tokens:
        return 0.0
    precisions = []
    for n in range(1, cfg.n_max + 1):
        matches, total = _order_stats(hyp_tokens, ref_tokens, n)
        if total == 0:
            continue
        precisions.append((matches if matches > 0 else cfg.epsilon) / total)
    if not precisions:
        return 0.0
    return _combine(precisions, _brevity_penalty(len(hyp_tokens), len(ref_tokens), cfg))


def corpus_bleu(
    hyps: Sequence[Sequence[str]],
    refs: Sequence[Sequence[str]],
    cfg: BleuConfig = BleuConfig(),
) -> float:
    """Micro-averaged BLEU over parallel lists of token sequences.

    Matches and n-gram totals are pooled before taking precisions, so empty
    hypotheses contribute nothing to the numerators but their references
    still count toward the brevity penalty. A single-pair corpus scores the
    same as :func:`sentence_bleu` on that pair.
    """
    if len(hyps) != len(refs):
        raise ValueError(f"length mismatch: {len(hyps)} hypotheses vs {len(refs)} references")
    matches = [0] * cfg.n_max
    totals = [0] * cfg.n_max
    hyp_len = ref_len = 0
    for hyp, ref in zip(hyps, refs):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, cfg.n_max + 1):
            m, t = _order_stats(hyp, ref, n)
            matches[n - 1] += m
            totals[n - 1] += t
    precisions = [
        (m if m > 0 else cfg.epsilon) / t for m, t in zip(matches, totals) if t > 0
    ]
    if not precisions:
        return 0.0
    return _combine(precisions, _brevity_penalty(hyp_len, ref_len, cfg))
