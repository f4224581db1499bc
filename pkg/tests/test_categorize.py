import pytest

from splitrephrase.categorize import (
    choose_split,
    classify,
    classify_with_rule,
    ends_copied,
    has_clause_delimiter,
    only_split_changes,
    source_target,
)
from splitrephrase.corpus import PairRecord, Sentence, SplitCategory
from splitrephrase.diff import token_diff

from category_cases import CASES, case_records, make_record

DI = SplitCategory.DIRECT_INSERTION
CNS = SplitCategory.CHANGES_NEAR_SPLIT
CAS = SplitCategory.CHANGES_ACROSS_SENTENCE


@pytest.mark.parametrize("record, expected", case_records(), ids=[c[0] for c in CASES])
def test_category_fixtures(record, expected):
    assert classify(record) is expected


def test_fixture_rules():
    rules = {rec.id: classify_with_rule(rec)[1] for rec, _ in case_records()}
    assert rules["colon_semicolon"] == "colon_semicolon"
    assert rules["conjunction_with_subject"] == "pattern:S CC S"
    assert rules["punctuation_only_split"] == "split_only"
    assert rules["conjunction_without_subject"] == "copied_ends"
    assert rules["preceding_clause_sbar_np_vp"] == "pattern:SBAR NP VP"
    assert rules["preceding_clause_s_np_vp"] == "pattern:S NP VP"
    assert rules["preceding_relative_clause"] == "default"


def _rec(long, s1, s2, tree):
    return PairRecord(
        id="t",
        long=Sentence.from_text(long),
        split=(Sentence.from_text(s1), Sentence.from_text(s2)),
    ), tree


def test_vp_cc_vp_pattern_at_first_level():
    rec, tree = _rec(
        "Officials met and they talked then left quickly .",
        "Officials met .",
        "They talked then went home .",
        "(S (VP (VBD Officials) (VBD met)) (CC and) (VP (PRP they) (VBD talked)) "
        "(ADVP (RB then)) (VP (VBD left) (RB quickly)) (. .))",
    )
    assert classify_with_rule(rec, tree) == (CNS, "pattern:VP CC VP")


def test_earlier_rule_wins():
    # S CC S beats S NP VP when both occur.
    rec, tree = _rec(
        "He ran and she hid , the dog barked .",
        "He ran .",
        "She hid while a dog barked .",
        "(S (S (PRP He) (VBD ran)) (CC and) (S (PRP she) (VBD hid)) (, ,) "
        "(NP (DT the) (NN dog)) (VP (VBD barked)) (. .))",
    )
    assert classify_with_rule(rec, tree) == (DI, "pattern:S CC S")


def test_functional_suffix_and_top_wrapper():
    rec, tree = _rec(
        "Rain fell and wind blew .",
        "Rain fell .",
        "Wind blew .",
        "(TOP (S (S-1 (NN Rain) (VBD fell)) (CC and) (S-2 (NN wind) (VBD blew)) (. .)))",
    )
    assert classify(rec, tree) is DI


def test_colon_only_counts_before_the_end():
    assert has_clause_delimiter(["a", ";", "b"])
    assert not has_clause_delimiter(["a", "b", ":"])


def test_split_only_detection():
    x = "the men came , the women left .".split()
    y = "the men came . [SEP] The women left .".split()
    assert only_split_changes(x, y, token_diff(x, y))
    y2 = "the men came . [SEP] Then women left .".split()
    assert not only_split_changes(x, y2, token_diff(x, y2))


def test_ends_copied_short_sentence():
    x = "a b c".split()
    assert ends_copied(x, token_diff(x, x))
    assert not ends_copied(x, token_diff(x, ["a", "b", "d"]))


def test_missing_tree():
    rec, _ = _rec("a b", "a", "b", None)
    with pytest.raises(ValueError, match="tree"):
        classify(rec)


def test_reserved_tokens_rejected():
    rec = make_record("r", "a [SEP] b", "a", "b", [("NP", "a b")])
    with pytest.raises(ValueError, match="reserved"):
        source_target(rec)


@pytest.mark.parametrize(
    "candidates, s1_len, expected",
    [([7], 3, 7), ([4, 9], 8, 9), ([5, 7], 6, 5), ([7, 5], 6, 5), ([2, 3, 4], 3, 3)],
)
def test_choose_split(candidates, s1_len, expected):
    ref = (["w"] * s1_len, ["z"])
    assert choose_split(candidates, ref) == expected


def test_choose_split_accepts_sentences():
    ref = (Sentence.from_text("a b c d e f g h"), Sentence.from_text("x"))
    assert choose_split([4, 9], ref) == 9
    with pytest.raises(ValueError):
        choose_split([], ref)
