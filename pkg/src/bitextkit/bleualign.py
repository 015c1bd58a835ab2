"""Translation-based sentence alignment.

Consumes an external machine translation of the source (one line per
sentence, already in the target language), finds high-BLEU anchor pairs as
a maximum-score monotone chain, optionally grows anchors into 1-2/2-1 beads
when merging a neighbour strictly improves BLEU, and fills the remaining
gaps with the length-based aligner. With a reverse translation the run is
repeated target-to-source and only beads found by both directions are kept.
"""

from __future__ import annotations

from dataclasses import dataclass

from bitextkit.core import AlignmentSet, Bead, SentenceList
from bitextkit.gale_church import LengthParams, _align_block
from bitextkit.scoring import BleuConfig, sentence_bleu, tokenize


@dataclass(frozen=True)
class ScoreMatrix:
    """BLEU of every (translated source sentence, target sentence) pair."""

    entries: tuple  # tuple of row tuples, each value in [0, 1]

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, pos: tuple[int, int]) -> float:
        return self.entries[pos[0]][pos[1]]


def score_matrix(
    src_translation: SentenceList, tgt: SentenceList, cfg: BleuConfig = BleuConfig()
) -> ScoreMatrix:
    hyp_tokens = [tokenize(s, src_translation.language) for s in src_translation.sentences]
    ref_tokens = [tokenize(s, tgt.language) for s in tgt.sentences]
    return ScoreMatrix(
        tuple(
            tuple(sentence_bleu(h, r, cfg) for r in ref_tokens) for h in hyp_tokens
        )
    )


def find_anchors(m: ScoreMatrix, min_score: float = 0.0) -> list[tuple[int, int]]:
    """Monotone chain of cells with score > min_score maximizing total score.

    Ties go to the chain nearer the main diagonal (smaller sum of |i - j|),
    then to the lexicographically smallest index sequence. Both total score
    and diagonal distance are additive, so a suffix DP minimizes the pair
    (-total, distance) per cell and a forward walk picks the smallest cell
    attaining it.
    """
    if not 0 <= min_score < 1:
        raise ValueError(f"min_score must be in [0, 1), got {min_score}")
    cells = [
        (i, j)
        for i in range(m.rows)
        for j in range(m.cols)
        if m[i, j] > min_score
    ]
    if not cells:
        return []
    # suffix[(i, j)] = best (-total, distance) over chains starting at (i, j)
    suffix: dict[tuple[int, int], tuple[float, int]] = {}

    def best_continuation(i: int, j: int) -> tuple[float, int]:
        best = (0.0, 0)
        for i2, j2 in cells:
            if i2 > i and j2 > j and (key := suffix[(i2, j2)]) < best:
                best = key
        return best

    for i, j in sorted(cells, reverse=True):
        cont = best_continuation(i, j)
        suffix[(i, j)] = (cont[0] - m[i, j], cont[1] + abs(i - j))
    chain: list[tuple[int, int]] = []
    frontier = (-1, -1)
    remaining = min(suffix[c] for c in cells)
    while remaining != (0.0, 0):
        nxt = min(
            c
            for c in cells
            if c[0] > frontier[0] and c[1] > frontier[1] and suffix[c] == remaining
        )
        chain.append(nxt)
        frontier = nxt
        remaining = best_continuation(*nxt)
    return chain


def _grow_anchors(
    anchors: list[tuple[int, int]],
    m: ScoreMatrix,
    mt_tokens: list,
    tgt_tokens: list,
    cfg: BleuConfig,
) -> list[Bead]:
    """Try one merge per anchor: absorb an adjacent unaligned target or
    source sentence when the merged BLEU strictly beats the anchor's score.
    Candidates are tried as target-after, target-before, source-after,
    source-before; the best strict improvement wins."""
    S, T = len(mt_tokens), len(tgt_tokens)
    used_src = {i for i, _ in anchors}
    used_tgt = {j for _, j in anchors}
    beads = []
    for i, j in anchors:
        base = m[i, j]
        options = []
        if j + 1 < T and j + 1 not in used_tgt:
            options.append(((i,), (j, j + 1), sentence_bleu(mt_tokens[i], tgt_tokens[j] + tgt_tokens[j + 1], cfg)))
        if j - 1 >= 0 and j - 1 not in used_tgt:
            options.append(((i,), (j - 1, j), sentence_bleu(mt_tokens[i], tgt_tokens[j - 1] + tgt_tokens[j], cfg)))
        if i + 1 < S and i + 1 not in used_src:
            options.append(((i, i + 1), (j,), sentence_bleu(mt_tokens[i] + mt_tokens[i + 1], tgt_tokens[j], cfg)))
        if i - 1 >= 0 and i - 1 not in used_src:
            options.append(((i - 1, i), (j,), sentence_bleu(mt_tokens[i - 1] + mt_tokens[i], tgt_tokens[j], cfg)))
        grown = max(options, key=lambda o: o[2], default=None)
        if grown is not None and grown[2] > base:
            src_ix, tgt_ix, score = grown
            used_src.update(src_ix)
            used_tgt.update(tgt_ix)
            beads.append(Bead(src_ix, tgt_ix, score, "bleualign"))
        else:
            beads.append(Bead((i,), (j,), base, "bleualign"))
    return beads


def _fill_gaps(
    anchor_beads: list[Bead],
    src: SentenceList,
    tgt: SentenceList,
    params: LengthParams,
) -> list[Bead]:
    """Length-align the sentences between consecutive anchors."""
    out: list[Bead] = []
    prev_s = prev_t = 0
    bounds = [(b.src[0], b.tgt[0], b) for b in anchor_beads] + [(len(src), len(tgt), None)]
    for s_start, t_start, bead in bounds:
        if prev_s < s_start or prev_t < t_start:
            path = _align_block(
                list(src.sentences[prev_s:s_start]), list(tgt.sentences[prev_t:t_start]), params
            )
            i, j = prev_s, prev_t
            for (mm, nn), step in path:
                out.append(Bead(tuple(range(i, i + mm)), tuple(range(j, j + nn)), -step, "bleualign+gc"))
                i, j = i + mm, j + nn
        if bead is not None:
            out.append(bead)
            prev_s = max(bead.src) + 1
            prev_t = max(bead.tgt) + 1
    return out


def _one_direction(
    src: SentenceList,
    tgt: SentenceList,
    src_translation: SentenceList,
    cfg: BleuConfig,
    min_score: float,
    params: LengthParams,
) -> list[Bead]:
    m = score_matrix(src_translation, tgt, cfg)
    anchors = find_anchors(m, min_score)
    mt_tokens = [tokenize(s, src_translation.language) for s in src_translation.sentences]
    tgt_tokens = [tokenize(s, tgt.language) for s in tgt.sentences]
    anchor_beads = _grow_anchors(anchors, m, mt_tokens, tgt_tokens, cfg)
    return _fill_gaps(anchor_beads, src, tgt, params)


def bleualign(
    src: SentenceList,
    tgt: SentenceList,
    src_translation: SentenceList,
    tgt_translation: SentenceList | None = None,
    cfg: BleuConfig = BleuConfig(),
    min_score: float = 0.0,
    params: LengthParams | None = None,
) -> AlignmentSet:
    """Anchor-and-fill alignment; bidirectional when tgt_translation given.

    The bidirectional result keeps exactly the beads produced by both the
    forward and the mirrored reverse run (so it is always a subset of the
    forward result and leaves the dropped sentences unaligned).
    """
    if len(src_translation) != len(src):
        raise ValueError(
            f"source has {len(src)} sentences but its translation has {len(src_translation)} lines"
        )
    if tgt_translation is not None and len(tgt_translation) != len(tgt):
        raise ValueError(
            f"target has {len(tgt)} sentences but its translation has {len(tgt_translation)} lines"
        )
    if params is None:
        params = LengthParams()
    forward = _one_direction(src, tgt, src_translation, cfg, min_score, params)
    if tgt_translation is None:
        return AlignmentSet(tuple(forward), len(src), len(tgt))
    reverse = _one_direction(tgt, src, tgt_translation, cfg, min_score, params)
    reverse_keys = {(b.tgt, b.src) for b in reverse}
    kept = tuple(b for b in forward if (b.src, b.tgt) in reverse_keys)
    return AlignmentSet(kept, len(src), len(tgt))
