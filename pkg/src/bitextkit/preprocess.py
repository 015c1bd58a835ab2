"""Paragraph-level cleanup of crawled article pairs.

Four fixes are applied before sentence splitting: punctuation/width
normalization, re-attachment of paragraph fragments created by bad breaks
(citation-only fragments on the Chinese side, "open in new tab" artifacts on
the English side), boilerplate paragraph removal driven by an editable
pattern file, and unigram majority truecasing for English.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from bitextkit.core import Document

logger = logging.getLogger(__name__)

# Quote/dash variants folded to canonical forms; full-width Latin letters and
# digits folded to ASCII. CJK punctuation (。！？，etc.) is left untouched.
_CHAR_MAP = {
    "“": '"', "”": '"', "„": '"', "«": '"', "»": '"',
    "‘": "'", "’": "'", "‚": "'", "‹": "'", "›": "'",
    "‐": "-", "‑": "-", "−": "-", "－": "-",
    "‒": "–",  # figure dash -> en dash
    "―": "—",  # horizontal bar -> em dash
    " ": " ", "　": " ",
}
_CHAR_MAP.update({chr(0xFF10 + d): chr(0x30 + d) for d in range(10)})
_CHAR_MAP.update({chr(0xFF21 + d): chr(0x41 + d) for d in range(26)})
_CHAR_MAP.update({chr(0xFF41 + d): chr(0x61 + d) for d in range(26)})
_TRANSLATION = str.maketrans(_CHAR_MAP)

_WS_RUN = re.compile(r"\s+")

# Paragraphs that are nothing but citation markers / stray punctuation
# (digits incl. full-width and superscript, hyphens, commas, brackets).
_ZH_CITATION_FRAGMENT = re.compile(
    r"^[0-9０-９⁰¹²³⁴-⁹\-–,，.。;；\[\]()（）\s]+$"
)
_EN_STITCH_MARKER = "open in new tab"


def normalize_text(text: str, lang: str = "en") -> str:
    """Standardize punctuation and character widths.

    Curly quotes become ASCII quotes, dash variants collapse to -/–/—,
    full-width Latin letters and digits become half-width, and whitespace
    runs collapse to single spaces. Chinese sentence punctuation is
    preserved. Idempotent; ``lang`` is accepted for symmetry but the mapping
    is language-independent.
    """
    del lang
    return _WS_RUN.sub(" ", text.translate(_TRANSLATION)).strip()


def normalize_document(doc: Document) -> Document:
    paragraphs = [normalize_text(p, doc.meta.language) for p in doc.paragraphs]
    return Document(doc.meta, tuple(p for p in paragraphs if p))


def stitch_paragraphs(doc: Document) -> Document:
    """Undo erroneous paragraph breaks introduced by the crawl.

    Chinese: a paragraph consisting only of citation markers and/or
    punctuation is appended (no joiner) to the preceding paragraph. English:
    the literal "open in new tab" fragment is deleted and its flanking
    fragments are concatenated into one paragraph. A fragment with no
    predecessor is left in place and logged.
    """
    lang = doc.meta.language
    out: list[str] = []
    i = 0
    paragraphs = list(doc.paragraphs)
    while i < len(paragraphs):
        p = paragraphs[i]
        if lang == "zh" and _ZH_CITATION_FRAGMENT.fullmatch(p):
            if out:
                out[-1] = out[-1] + p
            else:
                logger.warning(
                    "%s: citation fragment at document start has no predecessor",
                    doc.meta.doc_id,
                )
                out.append(p)
            i += 1
            continue
        if lang == "en" and p.strip().lower() == _EN_STITCH_MARKER:
            if out and i + 1 < len(paragraphs):
                out[-1] = out[-1] + " " + paragraphs[i + 1]
                i += 2
            else:
                logger.warning(
                    "%s: stitch marker at document edge dropped", doc.meta.doc_id
                )
                i += 1
            continue
        if lang == "en" and _EN_STITCH_MARKER in p.lower():
            start = p.lower().index(_EN_STITCH_MARKER)
            p = normalize_text(p[:start] + " " + p[start + len(_EN_STITCH_MARKER):])
        if p:
            out.append(p)
        i += 1
    return Document(doc.meta, tuple(out))


@dataclass(frozen=True)
class FilterRules:
    """Boilerplate paragraph filters.

    ``drop_prefix_patterns`` maps a language tag (or ``*`` for both) to
    regexes matched at paragraph start; ``drop_exact`` lists exact paragraph
    texts to drop regardless of language.
    """

    drop_prefix_patterns: dict = field(default_factory=dict)
    drop_exact: tuple[str, ...] = ()

    def for_language(self, lang: str) -> list[tuple[str, re.Pattern]]:
        rules = []
        for key in (lang, "*"):
            rules.extend(self.drop_prefix_patterns.get(key, ()))
        return rules


def load_filter_rules(path: str | Path) -> FilterRules:
    """Parse a pattern file: ``lang:regex`` per line (``lang`` is zh/en/*),
    ``lang:=text`` for exact paragraph matches, ``#`` comments."""
    patterns: dict[str, list] = {}
    exact: list[str] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        lang, sep, body = line.partition(":")
        if not sep or lang not in ("zh", "en", "*") or not body:
            raise ValueError(
                f"{path} line {lineno}: expected 'zh:'/'en:'/'*:' prefix and a pattern"
            )
        if body.startswith("="):
            exact.append(body[1:])
        else:
            patterns.setdefault(lang, []).append((line, re.compile(body)))
    return FilterRules(patterns, tuple(exact))


def default_filter_rules() -> FilterRules:
    with resources.as_file(
        resources.files("bitextkit.data").joinpath("filter_patterns.txt")
    ) as p:
        return load_filter_rules(p)


def filter_boilerplate(
    doc: Document, rules: FilterRules
) -> tuple[Document, list[tuple[int, str]]]:
    """Drop boilerplate paragraphs; return the surviving document and a
    removal log of (original paragraph index, matched rule)."""
    rule_list = rules.for_language(doc.meta.language)
    kept: list[str] = []
    removed: list[tuple[int, str]] = []
    for idx, p in enumerate(doc.paragraphs):
        if p in rules.drop_exact:
            removed.append((idx, f"={p}"))
            continue
        hit = next((label for label, rx in rule_list if rx.match(p)), None)
        if hit is not None:
            removed.append((idx, hit))
        else:
            kept.append(p)
    return Document(doc.meta, tuple(kept)), removed


# ---------------------------------------------------------------------------
# truecasing
# ---------------------------------------------------------------------------

_INITIAL_TOKEN = re.compile(r"^([^\w]*)(\w[\w'-]*)(.*)$", re.DOTALL)


@dataclass(frozen=True)
class TruecaseModel:
    """Most frequent surface casing per lowercased token, with its count."""

    casing: dict

    def __post_init__(self):
        for key, (surface, _count) in self.casing.items():
            if key != surface.lower():
                raise ValueError(f"casing: key {key!r} != lowercase of {surface!r}")


def train_truecaser(corpus: list[Document]) -> TruecaseModel:
    """Count surface forms of non-paragraph-initial English tokens and keep
    the majority form per lowercased key (ties toward the form seen first)."""
    counts: dict[str, dict[str, int]] = {}
    for doc in corpus:
        if doc.meta.language != "en":
            continue
        for para in doc.paragraphs:
            for token in para.split()[1:]:
                m = _INITIAL_TOKEN.match(token)
                if not m:
                    continue
                core = m.group(2)
                counts.setdefault(core.lower(), {}).setdefault(core, 0)
                counts[core.lower()][core] += 1
    casing = {}
    for key, forms in counts.items():
        best = max(forms.items(), key=lambda kv: kv[1])  # first-seen wins ties
        casing[key] = best
    return TruecaseModel(casing)


def truecase_initial(text: str, model: TruecaseModel) -> str:
    """Replace the first token of a text unit by its majority casing."""
    m = _INITIAL_TOKEN.match(text)
    if not m:
        return text
    prefix, core, rest = m.groups()
    entry = model.casing.get(core.lower())
    if entry is None:
        return text
    return prefix + entry[0] + rest


def apply_truecaser(doc: Document, model: TruecaseModel) -> Document:
    """Truecase the paragraph-initial token of each paragraph (en only)."""
    if doc.meta.language != "en":
        return doc
    return Document(doc.meta, tuple(truecase_initial(p, model) for p in doc.paragraphs))


def paragraph_count_report(
    pre: list[tuple[Document, Document]], post: list[tuple[Document, Document]]
) -> list[list]:
    """Per-pair paragraph counts before and after filtering as CSV rows
    (header first). Pairs are matched by pair_id; a pair present on only one
    side is an error."""
    def index(pairs):
        by_id = {}
        for zh_doc, en_doc in pairs:
            if zh_doc.meta.pair_id != en_doc.meta.pair_id:
                raise ValueError(
                    f"pair mismatch: {zh_doc.meta.pair_id} vs {en_doc.meta.pair_id}"
                )
            by_id[zh_doc.meta.pair_id] = (zh_doc, en_doc)
        return by_id

    pre_by_id, post_by_id = index(pre), index(post)
    if set(pre_by_id) != set(post_by_id):
        missing = set(pre_by_id) ^ set(post_by_id)
        raise ValueError(f"unmatched pair_id(s): {sorted(missing)}")
    rows: list[list] = [["pair_id", "zh_pre", "en_pre", "zh_post", "en_post"]]
    for pair_id, (zh_pre, en_pre) in pre_by_id.items():
        zh_post, en_post = post_by_id[pair_id]
        rows.append(
            [
                pair_id,
                len(zh_pre.paragraphs),
                len(en_pre.paragraphs),
                len(zh_post.paragraphs),
                len(en_post.paragraphs),
            ]
        )
    return rows
