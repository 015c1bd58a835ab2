"""Length-based dynamic-programming sentence alignment.

Cost of pairing a block of source sentences with a block of target
sentences is a bead-type prior plus a normal tail probability of the
character-length mismatch; the aligner finds the bead sequence of minimum
total cost over the {1-1, 1-0, 0-1, 2-1, 1-2, 2-2} move lattice. Also used
to fill the inter-anchor gaps of the translation-based aligner.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from bitextkit.core import AlignmentSet, Bead, SentenceList

#: Lattice moves as (source sentences consumed, target sentences consumed).
GC_MOVES = ((1, 1), (1, 0), (0, 1), (2, 1), (1, 2), (2, 2))

# Published bead priors (1-1 0.89, deletion 0.0099 each, expansion 0.089
# split evenly, 2-2 0.011) renormalized to sum to 1.
_RAW_PRIORS = {
    (1, 1): 0.89,
    (1, 0): 0.0099,
    (0, 1): 0.0099,
    (2, 1): 0.0445,
    (1, 2): 0.0445,
    (2, 2): 0.011,
}
_RAW_SUM = sum(_RAW_PRIORS.values())
DEFAULT_PRIORS = {k: v / _RAW_SUM for k, v in _RAW_PRIORS.items()}

DEFAULT_C = 1.0
DEFAULT_S2 = 6.8


@dataclass(frozen=True)
class LengthParams:
    """Length-model parameters: expected target chars per source char (c),
    per-char variance of the mismatch (s2), and bead-type priors."""

    c: float = DEFAULT_C
    s2: float = DEFAULT_S2
    priors: dict = field(default_factory=lambda: dict(DEFAULT_PRIORS))

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c: must be > 0")
        if self.s2 <= 0:
            raise ValueError("s2: must be > 0")
        total = sum(self.priors.values())
        if abs(total - 1.0) > 1e-6 or any(p <= 0 for p in self.priors.values()):
            raise ValueError("priors: must be positive and sum to 1")


# Rational tail approximation of the standard normal CDF
# (Abramowitz & Stegun 26.2.17, |error| < 7.5e-8).
_AS_P = 0.2316419
_AS_B = (0.319381530, -0.356563782, 1.781477937, -1.821255978, 1.330274429)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _tail_poly(ax: float) -> float:
    t = 1.0 / (1.0 + _AS_P * ax)
    return t * (_AS_B[0] + t * (_AS_B[1] + t * (_AS_B[2] + t * (_AS_B[3] + t * _AS_B[4]))))


def norm_cdf(x: float) -> float:
    """Standard normal CDF via the rational tail approximation."""
    if x == 0.0:
        return 0.5
    ax = abs(x)
    tail = math.exp(-0.5 * ax * ax - _LOG_SQRT_2PI) * _tail_poly(ax)
    return 1.0 - tail if x > 0 else tail


def _log_two_tail(ax: float) -> float:
    """log(2 * (1 - Phi(ax))) for ax >= 0, stable for large ax."""
    if ax == 0.0:
        return 0.0
    return math.log(2.0) - 0.5 * ax * ax - _LOG_SQRT_2PI + math.log(_tail_poly(ax))


def gc_cost(
    bead_type: tuple[int, int], src_chars: int, tgt_chars: int, params: LengthParams
) -> float:
    """Negative log probability of one bead given block character lengths."""
    if bead_type not in params.priors:
        raise ValueError(f"unknown bead type {bead_type!r}")
    base = src_chars if src_chars > 0 else tgt_chars
    if base <= 0:
        delta = 0.0
    else:
        delta = (tgt_chars - src_chars * params.c) / math.sqrt(base * params.s2)
    return -math.log(params.priors[bead_type]) - _log_two_tail(abs(delta))


def estimate_length_params(
    paragraph_pairs: list[tuple[str, str]], priors: dict | None = None
) -> LengthParams:
    """Fit c and s2 from parallel text blocks.

    c is the corpus character ratio; s2 the mean squared normalized residual
    (tgt - c*src)^2 / src over the pairs, floored at 1.0.
    """
    src_total = sum(len(s) for s, _ in paragraph_pairs)
    tgt_total = sum(len(t) for _, t in paragraph_pairs)
    if src_total == 0:
        raise ValueError("zero total source length")
    c = tgt_total / src_total
    residuals = [
        (len(t) - c * len(s)) ** 2 / len(s) for s, t in paragraph_pairs if len(s) > 0
    ]
    s2 = max(sum(residuals) / len(residuals), 1.0) if residuals else 1.0
    return LengthParams(c, s2, dict(priors) if priors else dict(DEFAULT_PRIORS))


def _align_block(
    src_sents: list[str], tgt_sents: list[str], params: LengthParams
) -> list[tuple[tuple[int, int], float]]:
    """Minimum-cost path over one lattice block; returns (move, cost) pairs.

    Cost ties are broken by most 1-1 beads, then fewest beads overall, then
    the lexicographically smallest move sequence. The first three are
    additive along the path, so a backward pass minimizes the triple
    (cost, -ones, beads) per node and a forward pass picks the smallest move
    that attains it.
    """
    S, T = len(src_sents), len(tgt_sents)
    slen = [len(s) for s in src_sents]
    tlen = [len(t) for t in tgt_sents]
    best: list[list[tuple | None]] = [[None] * (T + 1) for _ in range(S + 1)]
    best[S][T] = (0.0, 0, 0)

    def step_key(i: int, j: int, m: int, n: int) -> tuple:
        nxt = best[i + m][j + n]
        step = gc_cost((m, n), sum(slen[i : i + m]), sum(tlen[j : j + n]), params)
        return (step + nxt[0], nxt[1] - ((m, n) == (1, 1)), nxt[2] + 1), step

    for i in range(S, -1, -1):
        for j in range(T, -1, -1):
            if i == S and j == T:
                continue
            for m, n in GC_MOVES:
                if i + m > S or j + n > T:
                    continue
                key, _ = step_key(i, j, m, n)
                if best[i][j] is None or key < best[i][j]:
                    best[i][j] = key
    path = []
    i = j = 0
    while (i, j) != (S, T):
        for m, n in sorted(GC_MOVES):
            if i + m > S or j + n > T:
                continue
            key, step = step_key(i, j, m, n)
            if key == best[i][j]:
                path.append(((m, n), step))
                i, j = i + m, j + n
                break
    return path


def _paragraph_blocks(sl: SentenceList) -> list[tuple[int, int]]:
    """(start, end) sentence ranges of each paragraph, in order."""
    blocks = []
    start = 0
    for i in range(1, len(sl) + 1):
        if i == len(sl) or sl.paragraph_index[i] != sl.paragraph_index[start]:
            blocks.append((start, i))
            start = i
    return blocks


def gc_align(
    src: SentenceList,
    tgt: SentenceList,
    params: LengthParams | None = None,
    respect_paragraphs: bool = True,
) -> AlignmentSet:
    """Length-based alignment of a document pair.

    When both sides have the same paragraph count the lattice runs per
    corresponding paragraph pair (bad breaks cannot cross paragraphs and the
    DP stays small); otherwise one lattice covers the whole document. Bead
    scores are negated costs.
    """
    if params is None:
        params = LengthParams()
    src_blocks = _paragraph_blocks(src)
    tgt_blocks = _paragraph_blocks(tgt)
    if not (respect_paragraphs and len(src_blocks) == len(tgt_blocks) and src_blocks):
        src_blocks, tgt_blocks = [(0, len(src))], [(0, len(tgt))]
    all_beads: list[Bead] = []
    for (s0, s1), (t0, t1) in zip(src_blocks, tgt_blocks):
        path = _align_block(list(src.sentences[s0:s1]), list(tgt.sentences[t0:t1]), params)
        i, j = s0, t0
        for (m, n), step in path:
            all_beads.append(
                Bead(tuple(range(i, i + m)), tuple(range(j, j + n)), -step, "gc")
            )
            i, j = i + m, j + n
    return AlignmentSet(tuple(all_beads), len(src), len(tgt))


def load_length_params(path: str | Path) -> LengthParams:
    """Read a key-value parameter file: ``c=``, ``s2=``, ``priors.M-N=``."""
    c, s2 = DEFAULT_C, DEFAULT_S2
    priors = dict(DEFAULT_PRIORS)
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ValueError(f"{path} line {lineno}: expected key=value")
        if key == "c":
            c = float(value)
        elif key == "s2":
            s2 = float(value)
        elif re.fullmatch(r"priors\.\d-\d", key):
            m, n = key.split(".")[1].split("-")
            priors[(int(m), int(n))] = float(value)
        else:
            raise ValueError(f"{path} line {lineno}: unknown key {key!r}")
    return LengthParams(c, s2, priors)


def save_length_params(params: LengthParams, path: str | Path) -> None:
    lines = [f"c={params.c!r}", f"s2={params.s2!r}"]
    for (m, n), p in sorted(params.priors.items()):
        lines.append(f"priors.{m}-{n}={p!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
