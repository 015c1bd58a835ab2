"""Sentence boundary detection for zh/en article text.

Chinese splitting is deterministic (terminators 。！？ with closing
punctuation and trailing citation digits attached to the left). English has
two segmenters: a rule-based one with abbreviation, citation and
parenthetical handling, and an unsupervised trainer in the Kiss & Strunk
style (log-likelihood-ratio abbreviation detection plus frequent
sentence-starter override) so the two can be compared on the same corpus.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from bitextkit.core import Document

ZH_TERMINATORS = "。！？"  # 。！？
_ZH_CLOSERS = "」』”’）〉》】\"')]"
_EN_CLOSERS = "\"')]"
_EN_OPENERS = "\"'(["

#: Citation markers glued to a terminator, e.g. the "12-14" of "reported.12-14".
CITATION_RE = re.compile(r"[0-9]{1,3}(?:[-–,][0-9]{1,3})*")

_TERMINATOR_RUN = re.compile(r"[.?!]+")


def _citation_end(text: str, pos: int) -> int:
    """End of a citation-digit run starting at ``pos``, or ``pos`` if none.
    A run followed by a further digit is a long number, not a citation."""
    m = CITATION_RE.match(text, pos)
    if m and (m.end() == len(text) or not text[m.end()].isdigit()):
        return m.end()
    return pos


# ---------------------------------------------------------------------------
# Chinese
# ---------------------------------------------------------------------------

def segment_zh(paragraph: str) -> list[str]:
    """Split normalized Chinese text on 。！？.

    Closing quotes/brackets, citation digits and whitespace directly after a
    terminator attach to the left sentence, so the concatenation of the
    output reproduces the stripped input exactly.
    """
    text = paragraph.strip()
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] not in ZH_TERMINATORS:
            i += 1
            continue
        j = i + 1
        while True:
            k = j
            while j < n and (text[j] in _ZH_CLOSERS or text[j] in ZH_TERMINATORS):
                j += 1
            j = _citation_end(text, j)
            if j == k:
                break
        while j < n and text[j].isspace():
            j += 1
        sentences.append(text[start:j])
        start = i = j
    if start < n:
        sentences.append(text[start:])
    return sentences


# ---------------------------------------------------------------------------
# English, rule-based
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbbrevList:
    """Lowercase abbreviation entries without the trailing period; entries
    may contain spaces ("et al") or internal periods ("e.g")."""

    entries: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "entries", frozenset(self.entries))
        for e in self.entries:
            if e != e.lower() or e.endswith("."):
                raise ValueError(
                    f"entries: {e!r} must be lowercase without trailing period"
                )


def load_abbrevs(path: str | Path) -> AbbrevList:
    entries = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.add(line)
    return AbbrevList(frozenset(entries))


def default_abbrevs() -> AbbrevList:
    with resources.as_file(
        resources.files("bitextkit.data").joinpath("abbreviations.txt")
    ) as p:
        return load_abbrevs(p)


_WORD_BEFORE = re.compile(r"([A-Za-z0-9][A-Za-z0-9.'&–-]*)\s*$")
_TWO_WORDS_BEFORE = re.compile(
    r"([A-Za-z0-9][A-Za-z0-9.'&-]*)\s+([A-Za-z0-9][A-Za-z0-9.'&-]*)\s*$"
)


def _is_abbreviation(text: str, period_pos: int, abbrevs: AbbrevList) -> bool:
    """True if the word(s) ending at ``period_pos`` form a known abbreviation
    or a single-letter initial."""
    left = text[:period_pos]
    m = _WORD_BEFORE.search(left)
    if not m:
        return False
    word = m.group(1).rstrip(".").lower()
    if len(word) == 1 and word.isalpha():
        return True  # initials such as "F." in person names
    if word in abbrevs.entries:
        return True
    m2 = _TWO_WORDS_BEFORE.search(left)
    if m2:
        two = f"{m2.group(1)} {m2.group(2)}".rstrip(".").lower()
        if two in abbrevs.entries:
            return True
    return False


def segment_en_rules(paragraph: str, abbrevs: AbbrevList | None = None) -> list[str]:
    """Rule-based English sentence splitting.

    A boundary falls after ``.?!`` followed by a space and an
    uppercase/digit start, except that: known abbreviations and single-letter
    initials never end a sentence; decimal points and digit ranges are
    word-internal; citation digits glued to the terminator attach left (the
    boundary falls after them); and a parenthetical that ends with ")."
    attaches left instead of opening a new sentence.
    """
    if abbrevs is None:
        abbrevs = default_abbrevs()
    text = paragraph.strip()
    n = len(text)
    cuts: list[tuple[int, int]] = []  # (end of sentence, start of next)
    i = 0
    while i < n:
        ch = text[i]
        if ch not in ".?!":
            i += 1
            continue
        run = _TERMINATOR_RUN.match(text, i)
        j = run.end()
        if ch == "." and j == i + 1:
            if 0 < i and text[i - 1].isdigit() and j < n and text[j].isdigit():
                i = j  # decimal point or number range: 3.5, 10.12
                continue
            if _is_abbreviation(text, i, abbrevs):
                i = j
                continue
        # citation digits and closing punctuation attach to the left
        while True:
            k = j
            while j < n and text[j] in _EN_CLOSERS:
                j += 1
            j = _citation_end(text, j)
            if j == k:
                break
        if j >= n:
            break
        s = j
        while s < n and text[s] == " ":
            s += 1
        if s == j or s >= n:
            i = j  # no space after the terminator: not a boundary
            continue
        if text[s] == "(":
            close = text.find(")", s)
            if close != -1 and close + 1 < n and text[close + 1] == ".":
                i = s + 1  # ")."-final parenthetical attaches left
                continue
        first = s
        while first < n and text[first] in _EN_OPENERS:
            first += 1
        if first < n and (text[first].isupper() or text[first].isdigit()):
            cuts.append((j, s))
            i = s
        else:
            i = j
    spans = []
    start = 0
    for end, nxt in cuts:
        spans.append(text[start:end])
        start = nxt
    if start < n:
        spans.append(text[start:])
    return [s for s in (sp.strip() for sp in spans) if s]


# ---------------------------------------------------------------------------
# English, unsupervised (Punkt-style, reduced scope)
# ---------------------------------------------------------------------------

ABBREV_THRESHOLD = 0.3
STARTER_THRESHOLD = 30.0
COLLOC_THRESHOLD = 7.88
_MIN_COLLOC_FREQ = 2


@dataclass(frozen=True)
class PunktModel:
    """Learned segmentation parameters.

    The membership sets are stored as score maps (type -> log-likelihood
    score) so the model can be serialized with its evidence; ``in`` tests
    work as on sets.
    """

    abbreviations: dict = field(default_factory=dict)
    sentence_starters: dict = field(default_factory=dict)
    collocations: dict = field(default_factory=dict)
    params: tuple[float, float, float] = (
        ABBREV_THRESHOLD,
        STARTER_THRESHOLD,
        COLLOC_THRESHOLD,
    )

    def __post_init__(self):
        if any(t <= 0 for t in self.params):
            raise ValueError("params: thresholds must be positive")


_TOKEN_CORE = re.compile(r"[a-z0-9][a-z0-9.'&-]*")


def _token_type(token: str) -> str | None:
    """Lowercased token core with edge punctuation and the final period
    stripped; None for punctuation-only tokens."""
    m = _TOKEN_CORE.search(token.lower())
    if not m:
        return None
    return m.group(0).rstrip(".") or None


def _iter_tokens(corpus: list[Document]):
    for doc in corpus:
        if doc.meta.language != "en":
            continue
        for para in doc.paragraphs:
            tokens = para.split()
            if tokens:
                yield tokens


def _modified_llr(count_a: int, count_b: int, count_ab: int, n: int) -> float:
    """Dunning log-likelihood, modified form: H0 is p = count_b/n for the
    period following the type, H1 is p = 0.99."""
    p1 = min(count_b / n, 0.985)
    p2 = 0.99
    null = count_ab * math.log(p1) + (count_a - count_ab) * math.log(1.0 - p1)
    alt = count_ab * math.log(p2) + (count_a - count_ab) * math.log(1.0 - p2)
    return -2.0 * (null - alt)


def _col_llr(count_a: int, count_b: int, count_ab: int, n: int) -> float:
    """Standard Dunning log-likelihood that ``count_b`` follows ``count_a``
    more often than chance."""
    if count_b >= n or count_a >= n:
        return 0.0
    p = count_b / n
    p1 = count_ab / count_a
    p2 = (count_b - count_ab) / (n - count_a)
    s1 = count_ab * math.log(p) + (count_a - count_ab) * math.log(1.0 - p)
    s2 = (count_b - count_ab) * math.log(p) + (
        n - count_a - count_b + count_ab
    ) * math.log(1.0 - p)
    s3 = (
        0.0
        if count_a == count_ab or p1 <= 0
        else count_ab * math.log(p1) + (count_a - count_ab) * math.log(1.0 - p1)
    )
    s4 = (
        0.0
        if count_b == count_ab or p2 <= 0
        else (count_b - count_ab) * math.log(p2)
        + (n - count_a - count_b + count_ab) * math.log(1.0 - p2)
    )
    return -2.0 * (s1 + s2 - s3 - s4)


def train_punkt(corpus: list[Document]) -> PunktModel:
    """Learn abbreviations, frequent sentence starters and collocations from
    raw (unsegmented) English paragraphs.

    Deterministic in the corpus as a multiset: only aggregate counts feed
    the log-likelihood scores.
    """
    with_period: Counter = Counter()
    without_period: Counter = Counter()
    n_tokens = 0
    n_period_tokens = 0
    for tokens in _iter_tokens(corpus):
        for tok in tokens:
            n_tokens += 1
            typ = _token_type(tok)
            if tok.rstrip(_EN_CLOSERS).endswith("."):
                n_period_tokens += 1
                if typ:
                    with_period[typ] += 1
            elif typ:
                without_period[typ] += 1
    if n_tokens == 0 or n_period_tokens == 0:
        return PunktModel()

    abbreviations: dict[str, float] = {}
    for typ in sorted(with_period):
        if not any(c.isalpha() for c in typ):
            continue
        count_with = with_period[typ]
        count_without = without_period[typ]
        llr = _modified_llr(
            count_with + count_without, n_period_tokens, count_with, n_tokens
        )
        num_periods = typ.count(".") + 1
        num_nonperiods = len(typ) - num_periods + 1
        score = (
            llr
            * math.exp(-num_nonperiods)
            * num_periods
            * num_nonperiods ** -count_without
        )
        if score >= ABBREV_THRESHOLD:
            abbreviations[typ] = score

    # second pass: annotate sentence breaks with the learned abbreviations,
    # then score types that follow a break (starters) and cross-break pairs.
    type_total: Counter = Counter()
    at_break: Counter = Counter()
    pair_counts: Counter = Counter()
    n_breaks = 0
    for tokens in _iter_tokens(corpus):
        prev_break = False
        prev_typ = None
        for tok in tokens:
            typ = _token_type(tok)
            if typ:
                type_total[typ] += 1
                if prev_break:
                    at_break[typ] += 1
                    if prev_typ:
                        pair_counts[(prev_typ, typ)] += 1
            stripped = tok.rstrip(_EN_CLOSERS)
            is_break = stripped.endswith(("?", "!")) or (
                stripped.endswith(".") and typ is not None and typ not in abbreviations
            )
            if is_break:
                n_breaks += 1
            prev_break, prev_typ = is_break, typ

    starters: dict[str, float] = {}
    if n_breaks:
        for typ in sorted(at_break):
            if not typ[0].isalpha():
                continue
            llr = _col_llr(n_breaks, type_total[typ], at_break[typ], n_tokens)
            if (
                llr >= STARTER_THRESHOLD
                and n_tokens / n_breaks > type_total[typ] / at_break[typ]
            ):
                starters[typ] = llr

    collocations: dict[tuple[str, str], float] = {}
    for (t1, t2), c in sorted(pair_counts.items()):
        if c < _MIN_COLLOC_FREQ:
            continue
        llr = _col_llr(type_total[t1], type_total[t2], c, n_tokens)
        if llr >= COLLOC_THRESHOLD and n_tokens / type_total[t1] > type_total[t2] / c:
            collocations[(t1, t2)] = llr

    return PunktModel(abbreviations, starters, collocations)


def segment_punkt(paragraph: str, model: PunktModel) -> list[str]:
    """Split English text with a learned model.

    Decisions are made between whitespace tokens only: a token-final ``?``or
    ``!`` always breaks; a token-final period breaks when the next token
    starts upper/digit, unless the preceding type is a learned abbreviation
    and the following type is not a learned frequent sentence starter.
    """
    text = paragraph.strip()
    spans = [(m.start(), m.end()) for m in re.finditer(r"\S+", text)]
    cuts: list[int] = []
    for k in range(len(spans) - 1):
        tok = text[spans[k][0] : spans[k][1]]
        stripped = tok.rstrip(_EN_CLOSERS)
        if stripped.endswith(("?", "!")):
            cuts.append(k)
            continue
        if not stripped.endswith("."):
            continue
        nxt = text[spans[k + 1][0] : spans[k + 1][1]]
        first = nxt.lstrip(_EN_OPENERS)[:1]
        if not first or not (first.isupper() or first.isdigit()):
            continue
        typ = _token_type(tok)
        nxt_typ = _token_type(nxt)
        if (
            typ in model.abbreviations
            and nxt_typ not in model.sentence_starters
        ):
            continue
        cuts.append(k)
    sentences = []
    start_tok = 0
    for k in cuts:
        sentences.append(text[spans[start_tok][0] : spans[k][1]])
        start_tok = k + 1
    if start_tok < len(spans):
        sentences.append(text[spans[start_tok][0] : spans[-1][1]])
    return sentences


def save_punkt(model: PunktModel, path: str | Path) -> None:
    lines = [
        f"param\tabbrev_threshold\t{model.params[0]!r}",
        f"param\tstarter_threshold\t{model.params[1]!r}",
        f"param\tcolloc_threshold\t{model.params[2]!r}",
    ]
    lines += [f"abbrev\t{t}\t{s!r}" for t, s in sorted(model.abbreviations.items())]
    lines += [f"starter\t{t}\t{s!r}" for t, s in sorted(model.sentence_starters.items())]
    lines += [
        f"colloc\t{t1}\t{t2}\t{s!r}" for (t1, t2), s in sorted(model.collocations.items())
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_punkt(path: str | Path) -> PunktModel:
    abbreviations, starters, collocations = {}, {}, {}
    params = [ABBREV_THRESHOLD, STARTER_THRESHOLD, COLLOC_THRESHOLD]
    names = ["abbrev_threshold", "starter_threshold", "colloc_threshold"]
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        fields = line.split("\t")
        if fields[0] == "param":
            params[names.index(fields[1])] = float(fields[2])
        elif fields[0] == "abbrev":
            abbreviations[fields[1]] = float(fields[2])
        elif fields[0] == "starter":
            starters[fields[1]] = float(fields[2])
        elif fields[0] == "colloc":
            collocations[(fields[1], fields[2])] = float(fields[3])
    return PunktModel(abbreviations, starters, collocations, tuple(params))


def sbd_diff_report(zh_counts: dict, en_counts: dict) -> list[list]:
    """Per-article zh/en sentence-count comparison as CSV rows (header
    first), closed by a summary row with the quartiles of |diff|."""
    if set(zh_counts) != set(en_counts):
        raise ValueError(
            f"article sets differ: {sorted(set(zh_counts) ^ set(en_counts))}"
        )
    rows: list[list] = [["article", "zh", "en", "diff"]]
    diffs = []
    for article in sorted(zh_counts):
        diff = zh_counts[article] - en_counts[article]
        diffs.append(abs(diff))
        rows.append([article, zh_counts[article], en_counts[article], diff])
    if diffs:
        if len(diffs) == 1:
            q1 = q2 = q3 = float(diffs[0])
        else:
            import statistics

            q1, q2, q3 = statistics.quantiles(diffs, n=4, method="inclusive")
        rows.append(["|diff| quartiles (q1/median/q3)", q1, q2, q3])
    return rows
