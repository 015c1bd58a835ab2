"""Normalization, paragraph stitching, boilerplate filtering, truecasing."""

import datetime
import random

import pytest

from bitextkit.core import ArticleMeta, Document
from bitextkit.preprocess import (
    FilterRules,
    TruecaseModel,
    apply_truecaser,
    default_filter_rules,
    filter_boilerplate,
    load_filter_rules,
    normalize_document,
    normalize_text,
    stitch_paragraphs,
    train_truecaser,
    truecase_initial,
)


def doc(lang, *paragraphs, pair_id="P1"):
    m = ArticleMeta(f"{pair_id}-{lang}", pair_id, lang, datetime.date(2020, 1, 1), "")
    return Document(m, tuple(paragraphs))


class TestNormalize:
    def test_quote_and_dash_folding(self):
        assert normalize_text("“quote” — it’s fine") == '"quote" — it\'s fine'
        assert normalize_text("pages 12‐14 and −3") == "pages 12-14 and -3"

    def test_full_width_latin_and_digits(self):
        assert normalize_text("ＮＥＪＭ２０２１ａｂｃ") == "NEJM2021abc"

    def test_whitespace_collapse(self):
        assert normalize_text("a  b\t\tc\nd") == "a b c d"

    def test_chinese_punctuation_preserved(self):
        s = "试验结果。（见图）：好，真的！"
        assert normalize_text(s, "zh") == s

    def test_idempotent_on_random_text(self):
        rng = random.Random(11)
        pool = "ab …“”’－３Ｚ。，！ \t　分析术后x-y"
        for _ in range(200):
            raw = "".join(rng.choice(pool) for _ in range(40))
            once = normalize_text(raw)
            assert normalize_text(once) == once

    def test_normalize_document_touches_every_paragraph(self):
        d = doc("en", "“Quoted” start.", "ＮＥＪＭ  data")
        assert normalize_document(d).paragraphs == ('"Quoted" start.', "NEJM data")


class TestStitch:
    def test_zh_citation_fragment_joins_left_without_space(self):
        d = doc("zh", "结果显著。", "1,2", "另一段。")
        assert stitch_paragraphs(d).paragraphs == ("结果显著。1,2", "另一段。")

    def test_zh_fragment_at_start_left_alone(self):
        d = doc("zh", "3-5", "正文。")
        assert stitch_paragraphs(d).paragraphs == ("3-5", "正文。")

    def test_en_marker_paragraph_joins_flanks_with_space(self):
        d = doc("en", "The trial", "Open in new tab", "enrolled patients.")
        assert stitch_paragraphs(d).paragraphs == ("The trial enrolled patients.",)

    def test_en_inline_marker_removed(self):
        d = doc("en", "See Table 1 Open in new tab for counts.")
        assert stitch_paragraphs(d).paragraphs == ("See Table 1 for counts.",)

    def test_en_marker_at_document_edge_dropped(self):
        d = doc("en", "Body text.", "Open in new tab")
        assert stitch_paragraphs(d).paragraphs == ("Body text.",)

    def test_zh_text_paragraphs_untouched(self):
        d = doc("zh", "第一段。", "第二段有数字12。")
        assert stitch_paragraphs(d).paragraphs == d.paragraphs


class TestFilter:
    def test_rule_file_parsing(self, tmp_path):
        p = tmp_path / "rules.txt"
        p.write_text("# comment\nzh:图\nen:Figure [0-9]\n*:=Advertisement\n", encoding="utf-8")
        rules = load_filter_rules(p)
        assert [label for label, _ in rules.for_language("zh")] == ["zh:图"]
        assert [label for label, _ in rules.for_language("en")] == ["en:Figure [0-9]"]
        assert rules.drop_exact == ("Advertisement",)

    def test_rule_file_rejects_unknown_language(self, tmp_path):
        p = tmp_path / "rules.txt"
        p.write_text("fr:Figure\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_filter_rules(p)

    def test_prefix_rules_anchor_at_paragraph_start(self):
        rules = default_filter_rules()
        kept, removed = filter_boilerplate(
            doc("en", "Figure 1. Trial flow.", "We show Figure 1 in context."), rules
        )
        assert kept.paragraphs == ("We show Figure 1 in context.",)
        assert removed == [(0, "en:Figure [0-9]")]

    def test_default_rules_cover_both_languages(self):
        rules = default_filter_rules()
        zh_doc = doc("zh", "图1试验流程图。", "正文。", "参考文献")
        zh_kept, zh_removed = filter_boilerplate(zh_doc, rules)
        assert zh_kept.paragraphs == ("正文。",)
        assert [idx for idx, _ in zh_removed] == [0, 2]
        en_doc = doc("en", "References", "Real text.")
        en_kept, _ = filter_boilerplate(en_doc, rules)
        assert en_kept.paragraphs == ("Real text.",)

    def test_exact_drop_applies_to_any_language(self):
        rules = FilterRules({}, ("Advertisement",))
        kept, removed = filter_boilerplate(doc("zh", "正文。", "Advertisement"), rules)
        assert kept.paragraphs == ("正文。",)
        assert removed == [(1, "=Advertisement")]


class TestTruecase:
    def test_majority_casing_learned_from_non_initial_positions(self):
        corpus = [
            doc("en", "The drug lowered risk.", "Patients got the drug."),
            doc("en", "We used the NEJM data and the drug."),
        ]
        model = train_truecaser(corpus)
        assert model.casing["the"][0] == "the"
        assert model.casing["nejm"][0] == "NEJM"
        assert "patients" not in model.casing  # only seen paragraph-initially

    def test_apply_lowercases_ordinary_sentence_starts(self):
        model = TruecaseModel({"the": ("the", 5), "nejm": ("NEJM", 2)})
        assert truecase_initial("The trial ended.", model) == "the trial ended."
        assert truecase_initial("NEJM published it.", model) == "NEJM published it."
        assert truecase_initial("Unseen word stays.", model) == "Unseen word stays."

    def test_leading_punctuation_is_kept(self):
        model = TruecaseModel({"the": ("the", 5)})
        assert truecase_initial('"The trial."', model) == '"the trial."'

    def test_apply_truecaser_skips_chinese(self):
        model = TruecaseModel({"the": ("the", 5)})
        zh_doc = doc("zh", "The 不适用。")
        assert apply_truecaser(zh_doc, model) is zh_doc

    def test_tie_goes_to_first_seen_form(self):
        corpus = [doc("en", "x Data y data z.")]
        model = train_truecaser(corpus)
        assert model.casing["data"] == ("Data", 1)
