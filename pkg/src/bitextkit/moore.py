"""Two-pass sentence aligner: length model, then a word-translation model.

Pass one runs a Poisson sentence-length lattice and keeps 1-1 pairs whose
posterior clears a high threshold. Those pairs train an IBM Model 1 word
translation table. Pass two reruns the lattice with the translation
probability folded into each bead's score and emits the 1-1 pairs that
remain confident; everything else is left unaligned.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from bitextkit.core import AlignmentSet, Bead, SentenceList
from bitextkit.scoring import tokenize

log = logging.getLogger(__name__)

#: Lattice moves; no 2-2 merging in this model.
MOORE_MOVES = ((1, 1), (1, 0), (0, 1), (2, 1), (1, 2))

_RAW_PRIORS = {(1, 1): 0.89, (1, 0): 0.0099, (0, 1): 0.0099, (2, 1): 0.0445, (1, 2): 0.0445}
_RAW_SUM = sum(_RAW_PRIORS.values())
PRIORS = {k: v / _RAW_SUM for k, v in _RAW_PRIORS.items()}
_LOG_PRIORS = {k: math.log(v) for k, v in PRIORS.items()}

NULL_TOKEN = "<NULL>"
OTHER_TOKEN = "<OTHER>"

#: Floor for a target token whose translation mass is zero under the table
#: (unseen vocabulary); keeps partially-covered documents alignable.
_LEX_FLOOR = 1e-9

THETA1 = 0.99
THETA2 = 0.5
EM_ITERATIONS = 4


def _logsumexp(values: list[float]) -> float:
    top = max(values)
    if top == -math.inf:
        return top
    return top + math.log(sum(math.exp(v - top) for v in values))


def _log_poisson(k: int, lam: float) -> float:
    return k * math.log(lam) - lam - math.lgamma(k + 1)


@dataclass(frozen=True)
class LatticePosteriors:
    """Posterior probability of each bead, keyed by (src_start, tgt_start)
    then bead type. Probabilities are clamped to [0, 1]."""

    cells: dict
    src_len: int
    tgt_len: int

    def one_one(self, i: int, j: int) -> float:
        return self.cells.get((i, j), {}).get((1, 1), 0.0)


def _forward_backward(S: int, T: int, log_bead) -> LatticePosteriors:
    """Posteriors of every feasible bead under move set MOORE_MOVES.

    ``log_bead(i, j, m, n)`` is the log-probability of a bead consuming
    src[i:i+m] and tgt[j:j+n].
    """
    NEG = -math.inf
    alpha = [[NEG] * (T + 1) for _ in range(S + 1)]
    beta = [[NEG] * (T + 1) for _ in range(S + 1)]
    alpha[0][0] = 0.0
    for i in range(S + 1):
        for j in range(T + 1):
            if i == 0 and j == 0:
                continue
            terms = [
                alpha[i - m][j - n] + log_bead(i - m, j - n, m, n)
                for m, n in MOORE_MOVES
                if i - m >= 0 and j - n >= 0
            ]
            alpha[i][j] = _logsumexp(terms)
    beta[S][T] = 0.0
    for i in range(S, -1, -1):
        for j in range(T, -1, -1):
            if i == S and j == T:
                continue
            terms = [
                log_bead(i, j, m, n) + beta[i + m][j + n]
                for m, n in MOORE_MOVES
                if i + m <= S and j + n <= T
            ]
            beta[i][j] = _logsumexp(terms)
    z = alpha[S][T]
    cells: dict = {}
    if z == NEG:
        return LatticePosteriors(cells, S, T)
    for i in range(S + 1):
        for j in range(T + 1):
            if alpha[i][j] == NEG:
                continue
            for m, n in MOORE_MOVES:
                if i + m > S or j + n > T:
                    continue
                lp = alpha[i][j] + log_bead(i, j, m, n) + beta[i + m][j + n] - z
                p = min(max(math.exp(lp), 0.0), 1.0)
                cells.setdefault((i, j), {})[(m, n)] = p
    return LatticePosteriors(cells, S, T)


def _token_lengths(sl: SentenceList) -> list[int]:
    return [len(tokenize(s, sl.language)) for s in sl.sentences]


def _length_model(slen: list[int], tlen: list[int]):
    """log P(bead) = log prior + log Poisson(target tokens; source tokens * r)."""
    r = sum(tlen) / sum(slen) if sum(slen) else 1.0
    mean_src = sum(slen) / len(slen) if slen else 1.0

    def log_bead(i: int, j: int, m: int, n: int) -> float:
        ls = sum(slen[i : i + m]) if m else mean_src
        lt = sum(tlen[j : j + n])
        return _LOG_PRIORS[(m, n)] + _log_poisson(lt, max(ls * r, 1e-6))

    return log_bead


def length_pass(
    src: SentenceList, tgt: SentenceList, theta1: float = THETA1
) -> tuple[LatticePosteriors, list[tuple[int, int]]]:
    """First pass: Poisson length lattice; returns posteriors and the 1-1
    index pairs with posterior >= theta1."""
    if not 0.5 < theta1 < 1:
        raise ValueError(f"theta1 must be in (0.5, 1), got {theta1}")
    if len(src) == 0 or len(tgt) == 0:
        return LatticePosteriors({}, len(src), len(tgt)), []
    post = _forward_backward(len(src), len(tgt), _length_model(_token_lengths(src), _token_lengths(tgt)))
    confident = [
        (i, j)
        for i in range(len(src))
        for j in range(len(tgt))
        if post.one_one(i, j) >= theta1
    ]
    return post, confident


@dataclass(frozen=True)
class TranslationTable:
    """Word translation probabilities t(tgt | src) plus the target unigram
    counts of the training corpus (add-one smoothed on lookup)."""

    t: dict
    null_token: str = NULL_TOKEN
    tgt_counts: dict = field(default_factory=dict)
    ll_history: tuple = ()

    @property
    def src_vocab(self) -> set:
        return set(self.t) - {self.null_token}

    @property
    def tgt_vocab(self) -> set:
        return {w for dist in self.t.values() for w in dist}

    def unigram(self, word: str) -> float:
        total = sum(self.tgt_counts.values())
        vocab = len(self.tgt_counts) + 1
        return (self.tgt_counts.get(word, 0) + 1) / (total + vocab)


def train_ibm1(pairs: list, iterations: int = EM_ITERATIONS) -> TranslationTable:
    """IBM Model 1 EM over (source tokens, target tokens) pairs.

    Translation probabilities start uniform over co-occurring words (the
    null source token co-occurs with everything); each iteration collects
    expected counts and renormalizes. The per-iteration corpus
    log-likelihood is recorded on the result.
    """
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    pairs = [(list(s), list(t)) for s, t in pairs]
    if not pairs:
        raise ValueError("empty training pair list")
    cooc: dict[str, set] = {NULL_TOKEN: set()}
    tgt_counts: dict[str, int] = {}
    for src_toks, tgt_toks in pairs:
        for w in tgt_toks:
            tgt_counts[w] = tgt_counts.get(w, 0) + 1
        cooc[NULL_TOKEN].update(tgt_toks)
        for s in src_toks:
            cooc.setdefault(s, set()).update(tgt_toks)
    t = {s: {w: 1.0 / len(ws) for w in ws} for s, ws in cooc.items() if ws}
    history = []
    for _ in range(iterations):
        counts: dict[str, dict[str, float]] = {s: {} for s in t}
        ll = 0.0
        for src_toks, tgt_toks in pairs:
            context = [NULL_TOKEN] + src_toks
            for w in tgt_toks:
                denom = sum(t[s].get(w, 0.0) for s in context)
                ll += math.log(denom / len(context)) if denom > 0 else -math.inf
                if denom <= 0:
                    continue
                for s in context:
                    p = t[s].get(w, 0.0)
                    if p > 0:
                        counts[s][w] = counts[s].get(w, 0.0) + p / denom
        history.append(ll)
        t = {
            s: {w: c / total for w, c in ws.items()}
            for s, ws in counts.items()
            if (total := sum(ws.values())) > 0
        }
    return TranslationTable(t, NULL_TOKEN, tgt_counts, tuple(history))


def map_rare_tokens(pairs: list, min_count: int = 2) -> list:
    """Replace words seen fewer than min_count times (per side) with a
    single OTHER token; applied to the confident-pair set before EM."""
    src_counts: dict[str, int] = {}
    tgt_counts: dict[str, int] = {}
    pairs = [(list(s), list(t)) for s, t in pairs]
    for src_toks, tgt_toks in pairs:
        for w in src_toks:
            src_counts[w] = src_counts.get(w, 0) + 1
        for w in tgt_toks:
            tgt_counts[w] = tgt_counts.get(w, 0) + 1
    return [
        (
            [w if src_counts[w] >= min_count else OTHER_TOKEN for w in src_toks],
            [w if tgt_counts[w] >= min_count else OTHER_TOKEN for w in tgt_toks],
        )
        for src_toks, tgt_toks in pairs
    ]


def _map_oov(tokens: list, vocab: frozenset) -> list:
    """Alignment-time counterpart of map_rare_tokens: a token outside the
    trained vocabulary is by definition rare, so it scores as OTHER (when
    the table was trained with one) instead of hitting the mass floor."""
    if OTHER_TOKEN not in vocab:
        return tokens
    return [w if w in vocab else OTHER_TOKEN for w in tokens]


def _lexical_log_ratio(table: TranslationTable, src_toks: list, tgt_toks: list) -> float:
    """log of Model-1 probability over the target unigram product.

    (1/(l_s+1)^{l_t}) prod_j sum_i t(t_j|s_i)  /  prod_j u(t_j)
    """
    context = [table.null_token] + src_toks
    total = -len(tgt_toks) * math.log(len(context))
    for w in tgt_toks:
        mass = sum(table.t.get(s, {}).get(w, 0.0) for s in context)
        total += math.log(max(mass, _LEX_FLOOR)) - math.log(table.unigram(w))
    return total


def moore_align(
    src: SentenceList, tgt: SentenceList, table: TranslationTable, theta2: float = THETA2
) -> AlignmentSet:
    """Second pass: lattice with prior x Poisson x lexical-ratio bead scores.

    Emits 1-1 beads whose posterior reaches theta2; all other sentences come
    out as 1-0/0-1 beads. A table that shares no vocabulary with the
    document degenerates to the length-only model (warned once per call).
    """
    if not 0 < theta2 < 1:
        raise ValueError(f"theta2 must be in (0, 1), got {theta2}")
    S, T = len(src), len(tgt)
    if S == 0 or T == 0:
        beads = [Bead((i,), (), None, "moore") for i in range(S)]
        beads += [Bead((), (j,), None, "moore") for j in range(T)]
        return AlignmentSet(tuple(beads), S, T)
    src_tokens = [tokenize(s, src.language) for s in src.sentences]
    tgt_tokens = [tokenize(t, tgt.language) for t in tgt.sentences]
    slen = [len(ts) for ts in src_tokens]
    tlen = [len(ts) for ts in tgt_tokens]
    length_term = _length_model(slen, tlen)

    doc_src = {w for ts in src_tokens for w in ts}
    doc_tgt = {w for ts in tgt_tokens for w in ts}
    degenerate = not (doc_src & table.src_vocab) or not (doc_tgt & table.tgt_vocab)
    if degenerate:
        log.warning("translation table shares no vocabulary with the document; using length model only")
    else:
        src_tokens = [_map_oov(ts, table.src_vocab) for ts in src_tokens]
        tgt_tokens = [_map_oov(ts, table.tgt_vocab) for ts in tgt_tokens]

    def log_bead(i: int, j: int, m: int, n: int) -> float:
        lp = length_term(i, j, m, n)
        if degenerate or m == 0 or n == 0:
            return lp
        merged_src = [w for ts in src_tokens[i : i + m] for w in ts]
        merged_tgt = [w for ts in tgt_tokens[j : j + n] for w in ts]
        return lp + _lexical_log_ratio(table, merged_src, merged_tgt)

    post = _forward_backward(S, T, log_bead)
    accepted: list[tuple[int, int, float]] = []
    candidates = [
        (i, j, post.one_one(i, j))
        for i in range(S)
        for j in range(T)
        if post.one_one(i, j) >= theta2
    ]
    for i, j, p in sorted(candidates, key=lambda c: (-c[2], c[0], c[1])):
        if all(i != i2 and j != j2 and (i < i2) == (j < j2) for i2, j2, _ in accepted):
            accepted.append((i, j, p))
    accepted.sort()
    beads: list[Bead] = []
    si = ti = 0
    for i, j, p in accepted + [(S, T, 0.0)]:
        while si < i:
            beads.append(Bead((si,), (), None, "moore"))
            si += 1
        while ti < j:
            beads.append(Bead((), (ti,), None, "moore"))
            ti += 1
        if (i, j) != (S, T):
            beads.append(Bead((i,), (j,), p, "moore"))
            si, ti = i + 1, j + 1
    return AlignmentSet(tuple(beads), S, T)


def align_with_lexicon(
    src: SentenceList,
    tgt: SentenceList,
    theta1: float = THETA1,
    theta2: float = THETA2,
    iterations: int = EM_ITERATIONS,
) -> AlignmentSet:
    """Both passes on a single document pair (convenience wrapper)."""
    _, confident = length_pass(src, tgt, theta1)
    table = train_lexicon([(src, tgt, confident)], iterations)
    return moore_align(src, tgt, table, theta2)


def train_lexicon(
    docs_with_pairs: list, iterations: int = EM_ITERATIONS
) -> TranslationTable:
    """Pool confident pairs from (src, tgt, pairs) triples, map rare words
    to OTHER, and train one translation table for the corpus."""
    token_pairs = []
    for src, tgt, confident in docs_with_pairs:
        for i, j in confident:
            token_pairs.append(
                (tokenize(src.sentences[i], src.language), tokenize(tgt.sentences[j], tgt.language))
            )
    if not token_pairs:
        raise ValueError("no confident sentence pairs to train on")
    return train_ibm1(map_rare_tokens(token_pairs), iterations)


def save_table(table: TranslationTable, path: str | Path) -> None:
    """TSV dump (src, tgt, prob), descending probability within source.

    Target unigram counts ride along as ``#count`` records so the lexical
    score of a reloaded table matches the in-memory one.
    """
    lines = [f"#count\t{w}\t{table.tgt_counts[w]}" for w in sorted(table.tgt_counts)]
    for s in sorted(table.t):
        for w, p in sorted(table.t[s].items(), key=lambda kv: (-kv[1], kv[0])):
            lines.append(f"{s}\t{w}\t{p!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_table(path: str | Path) -> TranslationTable:
    t: dict[str, dict[str, float]] = {}
    tgt_counts: dict[str, int] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if fields[0] == "#count":
            if len(fields) != 3:
                raise ValueError(f"{path} line {lineno}: expected '#count<TAB>word<TAB>n'")
            tgt_counts[fields[1]] = int(fields[2])
            continue
        if fields[0].startswith("#"):
            continue
        if len(fields) != 3:
            raise ValueError(f"{path} line {lineno}: expected 3 tab-separated fields")
        t.setdefault(fields[0], {})[fields[1]] = float(fields[2])
    return TranslationTable(t, tgt_counts=tgt_counts)
