import gzip
import math
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from splitrephrase.corpus import Status
from splitrephrase.metrics import (
    COLUMNS,
    MetricReport,
    ParaphraseTable,
    bleu,
    bleu_tokens,
    corpus_sari,
    count_syllables,
    evaluate,
    fkgl,
    format_stats,
    format_table,
    length_stats,
    modified_precisions,
    output_lengths,
    pct_new,
    sari,
    sari_tokens,
    self_bleu,
)

import oracles
from builders import pair

FIXTURES = Path(__file__).parent / "fixtures"

small = st.lists(st.sampled_from("abcd"), min_size=1, max_size=10)


def test_tiny_sari_by_hand():
    # Orders 1-3: keep 1/0/0, delete 1/1/1, add 1/1/1; order 4 is empty.
    total, add, keep, dele = sari_tokens(list("abc"), list("adc"), [list("adc")])
    assert keep == pytest.approx(25.0)
    assert dele == pytest.approx(75.0)
    assert add == pytest.approx(75.0)
    assert total == pytest.approx(175 / 3)


def test_identity_output_scores_no_add_or_delete():
    total, add, keep, dele = sari("The cat sat .", "The cat sat .", ["A cat sat down ."])
    assert add == 0.0 and dele == 0.0
    assert total == pytest.approx(keep / 3, abs=1e-12)


def test_sari_strings_ignore_case_and_separator():
    a = sari("The cat sat and ate .", "the cat sat . [SEP] it ate .", ["The cat sat . It ate ."])
    b = sari_tokens("the cat sat and ate .".split(), "the cat sat . it ate .".split(),
                    ["the cat sat . it ate .".split()])
    assert a == b


def test_sari_errors():
    with pytest.raises(ValueError):
        sari("a", "", ["a"])
    with pytest.raises(ValueError):
        sari_tokens(["a"], ["a"], [])
    with pytest.raises(ValueError):
        corpus_sari(["a"], ["a", "b"], [["a"]])


@given(small, small, st.lists(small, min_size=1, max_size=3))
@settings(max_examples=300)
def test_sari_matches_oracle(src, out, refs):
    got = sari_tokens(src, out, refs)
    want = oracles.sari(src, out, refs)
    for g, w in zip(got, want):
        assert abs(g - w) <= 1e-9


TABLE_PAIRS = [("a", "b"), ("c", "d"), ("a b", "d")]


def _oracle_paraphrases():
    table = ParaphraseTable(TABLE_PAIRS)
    return {k: set(v) for k, v in table.entries.items()}


@given(small, small, st.lists(small, min_size=1, max_size=3))
@settings(max_examples=300)
def test_paraphrase_sari_matches_oracle_and_never_lowers(src, out, refs):
    table = ParaphraseTable(TABLE_PAIRS)
    got = sari_tokens(src, out, refs, table)
    want = oracles.sari(src, out, refs, _oracle_paraphrases())
    for g, w in zip(got, want):
        assert abs(g - w) <= 1e-9
    plain = sari_tokens(src, out, refs)
    assert got[0] >= plain[0] - 1e-9
    assert got[3] == plain[3]


def test_paraphrase_credit_for_kept_word():
    table = ParaphraseTable([("assist", "help")])
    src = "we assist them"
    plain = sari(src, src, ["we help them"])
    para = sari(src, src, ["we help them"], table)
    assert para[2] > plain[2]
    assert para[1] == plain[1] == 0.0


def test_paraphrase_credit_for_added_word():
    table = ParaphraseTable([("aid", "help")])
    plain = sari("we assist them", "we aid them", ["we help them"])
    para = sari("we assist them", "we aid them", ["we help them"], table)
    assert plain[1] == 0.0
    assert para[1] > 0.0


def test_ppdb_loading(tmp_path):
    table = ParaphraseTable.load(FIXTURES / "ppdb_sample.txt")
    assert table.paraphrases("Assist") == {"help"}
    assert "the movie" in table.paraphrases("the film")
    gz = tmp_path / "p.gz"
    with gzip.open(gz, "wt") as fh:
        fh.write("[X] ||| car ||| auto ||| s=1\n")
    assert ParaphraseTable.load(gz).paraphrases("auto") == {"car"}
    bad = tmp_path / "bad.txt"
    bad.write_text("only ||| two\n")
    with pytest.raises(ValueError):
        ParaphraseTable.load(bad)


def test_corpus_sari_is_mean_of_sentences():
    srcs, outs, refs = ["a b c", "d e f"], ["a b", "d x f"], [["a b"], ["d y f"]]
    per = [sari(s, o, r) for s, o, r in zip(srcs, outs, refs)]
    got = corpus_sari(srcs, outs, refs)
    for i in range(4):
        assert got[i] == pytest.approx(sum(p[i] for p in per) / 2)


def test_bleu_identity_and_brevity():
    texts = ["the cat sat on the mat .", "a b"]
    assert bleu(texts, texts) == 100.0
    assert self_bleu(texts, texts) == 100.0
    hyp, ref = ["a b c d"], ["a b c d e f"]
    assert bleu(hyp, ref) == pytest.approx(100 * math.exp(1 - 6 / 4))


def test_bleu_zero_when_an_order_has_no_match():
    assert bleu(["a b c d"], ["a c b d"]) == 0.0


def test_bleu_multiple_references():
    assert bleu(["a b c d"], [["x y z w", "a b c d"]]) == 100.0
    with pytest.raises(ValueError):
        bleu(["a", "b"], ["a"])


@given(st.lists(st.tuples(small, st.lists(small, min_size=1, max_size=3)),
                min_size=1, max_size=4))
@settings(max_examples=300)
def test_modified_precision_matches_oracle(corpus):
    hyps = [h for h, _ in corpus]
    refs = [r for _, r in corpus]
    got = modified_precisions(hyps, refs, 4)
    for n in range(1, 5):
        want = oracles.modified_precision(hyps, refs, n)
        if want is None:
            assert got[n - 1] is None
        else:
            assert abs(got[n - 1] - want) <= 1e-9


def test_bleu_tokens_requires_alignment():
    with pytest.raises(ValueError):
        bleu_tokens([], [])


@pytest.mark.parametrize(
    "word, n",
    [("cat", 1), ("table", 2), ("make", 1), ("the", 1), ("readability", 5),
     ("syllable", 3), ("rhythm", 1), ("a", 1), ("42", 1)],
)
def test_syllables(word, n):
    assert count_syllables(word) == n


def test_fkgl_hand_value():
    # 1 sentence, 3 words, 3 syllables.
    assert fkgl(["The cat sat."]) == pytest.approx(-2.62, abs=1e-9)


def test_fkgl_splits_at_separator():
    one = fkgl(["The cat sat . [SEP] The dog ran ."])
    two = fkgl(["The cat sat.", "The dog ran."])
    assert one == pytest.approx(two)
    with pytest.raises(ValueError):
        fkgl(["..."])


def test_pct_new():
    assert pct_new(["a", "b"], ["a", "c", "d"]) == pytest.approx(200 / 3)
    assert pct_new(["The"], ["the", "[SEP]"]) == 0.0
    with pytest.raises(ValueError):
        pct_new(["a"], ["[SEP]"])


def test_output_lengths():
    slen, olen = output_lengths([["a", "b", ".", "[SEP]", "c", "."], ["d", "e", "f", "."]])
    assert slen == pytest.approx((2 + 1 + 3) / 3)
    assert olen == pytest.approx((3 + 3) / 2)


def test_length_stats_skips_rejected():
    recs = [
        pair("1", "a b c d", "a b", "c d"),
        pair("2", "a b c d", "a b", "c e"),
        pair("3", "x y", "x", "y", status=Status.REJECTED, reason="low_overlap"),
    ]
    st_ = length_stats(recs)
    assert (st_.n_pairs, st_.n_unique) == (2, 1)
    assert st_.long_len == 4 and st_.split_len == 2
    assert st_.pct_new == pytest.approx(12.5)
    assert length_stats(recs, include_rejected=True).n_pairs == 3
    with pytest.raises(ValueError):
        length_stats(recs[2:])


def test_evaluate_identity_system():
    src = ["The cat sat on the mat and the dog ran .", "It rained all day ."]
    refs = [["The cat sat on the mat . The dog ran ."], ["It rained all day ."]]
    rep = evaluate(src, src, refs)
    assert rep.sari_add == 0.0 and rep.sari_del == 0.0
    assert rep.self_bleu == 100.0 and rep.pct_new == 0.0
    assert rep.sari == pytest.approx((rep.sari_add + rep.sari_keep + rep.sari_del) / 3, abs=1e-9)
    assert rep.bert_score is None
    assert evaluate(src, src, refs, bert_scores=[0.5, 0.7]).bert_score == pytest.approx(0.6)
    with pytest.raises(ValueError):
        evaluate(src, src, refs, bert_scores=[0.5])


def test_report_rejects_inconsistent_sari():
    with pytest.raises(ValueError):
        MetricReport(50, 10, 20, 30, 0, 0, 0, 0, 0, 0)


def test_table_columns_and_format():
    assert [c for c, _ in COLUMNS] == [
        "SARI", "add", "keep", "del", "BScore", "FK", "BLEU", "SLen", "OLen", "sBLEU", "%new"]
    rep = MetricReport(20.0, 0.0, 60.0, 0.0, 8.1, 41.0, 20.0, 20.0, 100.0, 0.0)
    lines = format_table({"Source": rep}).splitlines()
    assert lines[0].split() == ["System"] + [c for c, _ in COLUMNS]
    assert lines[1].split() == ["Source", "20.0", "0.0", "60.0", "0.0", "-", "8.1", "41.0",
                                "20.0", "20.0", "100.0", "0.0"]
    stats = length_stats([pair("1", "a b c d", "a b", "c d")])
    out = format_stats("toy", stats).splitlines()
    assert out[0].split() == ["System", "#pairs", "#unique", "%new", "Long", "Split"]
    assert out[1].split() == ["toy", "1", "1", "0.0", "4.0", "2.0"]
