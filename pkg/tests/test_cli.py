import json
import math
import shutil
from pathlib import Path

import numpy as np
import pytest

from splitrephrase.cli import load_config, main
from splitrephrase.corpus import PairRecord, Sentence, Status, read_pairs, write_pairs
from splitrephrase.loss import save_prob_archive
from splitrephrase.text import PAD

from builders import pair

FIXTURES = Path(__file__).parent / "fixtures"
PAIRS = FIXTURES / "pairs.jsonl"
TREES = FIXTURES / "pair_trees.tsv"


def run(*argv):
    return main([str(a) for a in argv])


def summary(capsys):
    return json.loads(capsys.readouterr().out)


@pytest.fixture
def staged(tmp_path, capsys):
    """Run filter -> categorize -> label on the fixture file."""
    f, c, lab = tmp_path / "f.jsonl", tmp_path / "c.jsonl", tmp_path / "l.jsonl"
    assert run("filter", "-i", PAIRS, "-o", f) == 0
    assert run("categorize", "-i", f, "--trees", TREES, "-o", c) == 0
    assert run("label", "-i", c, "-o", lab) == 0
    capsys.readouterr()
    return f, c, lab


def test_filter_fixture(tmp_path, capsys):
    out = tmp_path / "f.jsonl"
    report = tmp_path / "report.json"
    assert run("filter", "-i", PAIRS, "-o", out, "--report", report) == 0
    s = summary(capsys)
    assert s["status"] == {"filtered": 7, "rejected": 3}
    assert s["rejection_reasons"] == {
        "disconnected": 1, "intratoken_punct": 1, "low_similarity": 1}
    assert json.loads(report.read_text()) == s
    records = list(read_pairs(out))
    assert len(records) == 10
    assert {r.id for r in records if r.status is Status.REJECTED} == {
        "gerund", "concluding_relative_clause", "colon_semicolon"}


def test_threshold_flags(tmp_path, capsys):
    out = tmp_path / "f.jsonl"
    assert run("filter", "-i", PAIRS, "-o", out, "--min-sim", "0.2") == 0
    assert summary(capsys)["status"] == {"filtered": 8, "rejected": 2}
    assert run("filter", "-i", PAIRS, "-o", out, "--min-overlap", "0.99") == 0
    assert summary(capsys)["rejection_reasons"]["low_overlap"] >= 1


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text(f"[paths]\ninput = {PAIRS}\noutput = {tmp_path / 'o.jsonl'}\n"
                   "[filter]\nmin_similarity = 0.2\n")
    assert run("filter", "--config", cfg) == 0
    assert summary(capsys)["status"]["filtered"] == 8
    # flags win over the file
    assert run("filter", "--config", cfg, "--min-sim", "0.4") == 0
    assert summary(capsys)["status"]["filtered"] == 7
    assert load_config(str(cfg)).filter.min_similarity == 0.2


def test_config_unknown_option(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[filter]\nnonsense = 1\n")
    assert run("filter", "--config", cfg, "-i", PAIRS, "-o", tmp_path / "o") == 1


def test_categorize_and_label(staged, capsys):
    _, c, lab = staged
    cats = {r.id: r.category.value for r in read_pairs(c) if r.category}
    assert cats == {
        "conjunction_with_subject": "DirectInsertion",
        "punctuation_only_split": "DirectInsertion",
        "conjunction_without_subject": "ChangesNearSplit",
        "preposition_subordinate_clause": "ChangesNearSplit",
        "preceding_relative_clause": "ChangesAcrossSentence",
        "preceding_clause_sbar_np_vp": "ChangesAcrossSentence",
        "preceding_clause_s_np_vp": "ChangesAcrossSentence",
    }
    labelled = [r for r in read_pairs(lab) if r.status is Status.FILTERED]
    assert all(r.alignment is not None for r in labelled)
    assert all(any(t.startswith("rule:") for t in r.tags) for r in labelled)


def test_jobs_match_serial(tmp_path, capsys):
    serial, parallel = tmp_path / "s.jsonl", tmp_path / "p.jsonl"
    assert run("filter", "-i", PAIRS, "-o", serial) == 0
    assert run("filter", "-i", PAIRS, "-o", parallel, "--jobs", "2") == 0
    assert serial.read_text() == parallel.read_text()


def test_categorize_without_trees_reports_errors(tmp_path, capsys):
    f = tmp_path / "f.jsonl"
    run("filter", "-i", PAIRS, "-o", f)
    capsys.readouterr()
    assert run("categorize", "-i", f, "-o", tmp_path / "c.jsonl") == 1
    s = summary(capsys)
    assert s["errors"] == 7 and "tree" in s["error_messages"][0]


def test_malformed_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    shutil.copy(PAIRS, bad)
    with open(bad, "a") as fh:
        fh.write("{broken\n")
    assert run("filter", "-i", bad, "-o", tmp_path / "o.jsonl") == 1
    s = summary(capsys)
    assert s["records"] == 10 and s["errors"] == 1
    assert "line 11" in s["error_messages"][0]


def test_missing_input_and_usage_errors(tmp_path):
    assert run("filter", "-i", tmp_path / "nope.jsonl", "-o", tmp_path / "o") == 1
    with pytest.raises(SystemExit) as info:
        run("filter", "--min-sim", "abc")
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        run("frobnicate")
    assert info.value.code == 1


def test_stats_table(staged, capsys):
    f, _, _ = staged
    assert run("stats", "-i", f, "--name", "fixture") == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["System", "#pairs", "#unique", "%new", "Long", "Split"]
    row = lines[1].split()
    assert row[:3] == ["fixture", "7", "7"]
    assert run("stats", "-i", f, "--include-rejected") == 0
    assert capsys.readouterr().out.splitlines()[1].split()[1] == "10"


def test_evaluate_identity(tmp_path, capsys):
    src = tmp_path / "src.txt"
    ref = tmp_path / "ref.txt"
    src.write_text("The cat sat and the dog ran .\nIt rained all day and we stayed in .\n")
    ref.write_text("The cat sat . [SEP] The dog ran .\nIt rained all day . [SEP] We stayed in .\n")
    report = tmp_path / "r.json"
    assert run("evaluate", "--sources", src, "--outputs", src, "--refs", ref,
               "--name", "Source", "--report", report) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].split()[:5] == ["System", "SARI", "add", "keep", "del"]
    data = json.loads(report.read_text())
    assert data["sari_add"] == 0.0 and data["sari_del"] == 0.0
    assert data["pct_new"] == 0.0 and data["self_bleu"] == 100.0
    assert data["sari"] == pytest.approx(data["sari_keep"] / 3, abs=1e-9)


def test_evaluate_with_ppdb_and_mismatch(tmp_path, capsys):
    src = tmp_path / "src.txt"
    out = tmp_path / "out.txt"
    ref = tmp_path / "ref.txt"
    src.write_text("we assist them .\n")
    out.write_text("we assist them .\n")
    ref.write_text("we help them .\n")
    r1, r2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run("evaluate", "--sources", src, "--outputs", out, "--refs", ref,
               "--ppdb", FIXTURES / "ppdb_sample.txt", "--report", r1) == 0
    assert run("evaluate", "--sources", src, "--outputs", out, "--refs", ref,
               "--ppdb", FIXTURES / "ppdb_sample.txt", "--no-paraphrase", "--report", r2) == 0
    assert json.loads(r1.read_text())["sari"] > json.loads(r2.read_text())["sari"]
    ref.write_text("a\nb\n")
    assert run("evaluate", "--sources", src, "--outputs", out, "--refs", ref) == 1


def test_loss_eval_uniform(staged, tmp_path, capsys):
    _, _, lab = staged
    records = [r for r in read_pairs(lab) if r.alignment is not None]
    vocab = sorted({t for r in records for t in r.alignment.x_padded + r.alignment.y_padded}
                   | {PAD})
    V = len(vocab)
    seqs = {r.id: np.full((len(r.alignment.delta), V), 1.0 / V) for r in records}
    classes = {r.id: [0.5, 0.25, 0.25] for r in records}
    probs = tmp_path / "p.npz"
    save_prob_archive(probs, vocab, seqs, classes)
    report = tmp_path / "loss.json"
    assert run("loss-eval", "-i", lab, "--probs", probs, "--weight", "0.5",
               "--report", report) == 0
    data = json.loads(report.read_text())
    assert data["records"] == 7
    assert data["seq_loss"] == pytest.approx(math.log(V), abs=1e-9)
    assert "joint_loss" in data


def test_loss_eval_missing_probabilities(staged, tmp_path, capsys):
    _, _, lab = staged
    probs = tmp_path / "p.npz"
    save_prob_archive(probs, ["a"], {})
    assert run("loss-eval", "-i", lab, "--probs", probs) == 1


def test_ingest_command(tmp_path, capsys):
    (tmp_path / "d.en").write_text("The cat sat and the dog ran .\n")
    (tmp_path / "d.fr").write_text("Le chat .\nLe chien .\n")
    (tmp_path / "d.align").write_text("0 - 0 1\n0 - 5\n")
    (tmp_path / "tr.tsv").write_text("d:tgt:0\tThe cat sat .\nd:tgt:1\tThe dog ran .\n")
    out = tmp_path / "raw.jsonl"
    code = run("ingest", "--src", tmp_path / "d.en", "--tgt", tmp_path / "d.fr",
               "--align", tmp_path / "d.align", "--translations", tmp_path / "tr.tsv",
               "--pivot-language", "fr", "-o", out)
    assert code == 1  # the second alignment line is out of range
    s = summary(capsys)
    assert s["records"] == 1 and s["counts"]["kept"] == 1
    (rec,) = read_pairs(out)
    assert rec.split[1].text == "The dog ran ."


def test_filter_with_conllu(tmp_path, capsys):
    raw = tmp_path / "raw.jsonl"
    bare = PairRecord(
        id="p1",
        long=Sentence.from_text("The cat sat and the dog slept ."),
        split=(Sentence.from_text("The cat sat ."), Sentence.from_text("The dog slept .")),
        scores={"similarity": 0.9},
    )
    write_pairs([bare], raw)
    out = tmp_path / "f.jsonl"
    assert run("filter", "-i", raw, "-o", out, "--conllu", FIXTURES / "sample.conllu") == 0
    (rec,) = read_pairs(out)
    assert rec.status is Status.FILTERED
    assert rec.long.lemmas[2] == "sit"
    assert rec.scores["overlap_r"] == pytest.approx(1.0)
