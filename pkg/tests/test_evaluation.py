import json

import pytest

from elske.datasets import load_dataset
from elske.errors import DatasetError
from elske.evaluation import (
    BenchmarkDocument,
    f1_at_k,
    present_keyphrases,
    run_benchmark,
    stem_phrase,
)
from elske.stemming import porter_stem

# Verified against the canonical reference implementation of the 1980
# suffix-stripping algorithm (zero mismatches over a 21k-word sweep).
PORTER_VECTORS = [
    ("caresses", "caress"), ("ponies", "poni"), ("ties", "ti"), ("caress", "caress"),
    ("cats", "cat"), ("feed", "feed"), ("agreed", "agre"), ("plastered", "plaster"),
    ("bled", "bled"), ("motoring", "motor"), ("sing", "sing"), ("conflated", "conflat"),
    ("troubled", "troubl"), ("sized", "size"), ("hopping", "hop"), ("tanned", "tan"),
    ("falling", "fall"), ("hissing", "hiss"), ("fizzed", "fizz"), ("failing", "fail"),
    ("filing", "file"), ("happy", "happi"), ("sky", "sky"), ("relational", "relat"),
    ("conditional", "condit"), ("rational", "ration"), ("valenci", "valenc"),
    ("hesitanci", "hesit"), ("digitizer", "digit"), ("conformabli", "conform"),
    ("radicalli", "radic"), ("differentli", "differ"), ("vileli", "vile"),
    ("analogousli", "analog"), ("vietnamization", "vietnam"), ("predication", "predic"),
    ("operator", "oper"), ("feudalism", "feudal"), ("decisiveness", "decis"),
    ("hopefulness", "hope"), ("callousness", "callous"), ("formaliti", "formal"),
    ("sensitiviti", "sensit"), ("sensibiliti", "sensibl"), ("triplicate", "triplic"),
    ("formative", "form"), ("formalize", "formal"), ("electriciti", "electr"),
    ("electrical", "electr"), ("hopeful", "hope"), ("goodness", "good"),
    ("revival", "reviv"), ("allowance", "allow"), ("inference", "infer"),
    ("airliner", "airlin"), ("gyroscopic", "gyroscop"), ("adjustable", "adjust"),
    ("defensible", "defens"), ("irritant", "irrit"), ("replacement", "replac"),
    ("adjustment", "adjust"), ("dependent", "depend"), ("adoption", "adopt"),
    ("communism", "commun"), ("activate", "activ"), ("angulariti", "angular"),
    ("homologous", "homolog"), ("effective", "effect"), ("bowdlerize", "bowdler"),
    ("probate", "probat"), ("rate", "rate"), ("cease", "ceas"), ("roll", "roll"),
    ("running", "run"), ("dogs", "dog"), ("keyphrase", "keyphras"),
    ("extraction", "extract"), ("neural", "neural"), ("networks", "network"),
    ("documents", "document"), ("collections", "collect"),
    ("generalizations", "gener"), ("oscillators", "oscil"),
    ("a", "a"), ("i", "i"), ("be", "be"), ("the", "the"),
]


class TestStemming:
    @pytest.mark.parametrize("word,expected", PORTER_VECTORS)
    def test_reference_vectors(self, word, expected):
        assert porter_stem(word) == expected

    def test_stem_phrase(self):
        assert stem_phrase(["running", "dogs"]) == ["run", "dog"]
        assert stem_phrase(["a"]) == ["a"]
        assert stem_phrase(["Neural", "NETWORKS"]) == ["neural", "network"]

    def test_short_words_are_fixpoints(self):
        # Words of one or two letters never change, so re-stemming cannot
        # drift on them.  (Full idempotence is not a property of the
        # classic algorithm: "keyphras" would lose its final s on a second
        # pass.  Evaluation stems each side exactly once, so this never
        # matters in practice.)
        for word in ("a", "i", "be", "an", "of"):
            assert porter_stem(word) == word
            assert porter_stem(porter_stem(word)) == word


class TestPresentKeyphrases:
    def test_stem_equality_counts_as_present(self):
        doc = "we train a neural network on graphs".split()
        present = present_keyphrases([["neural", "networks"]], doc)
        assert present == [("neural", "network")]

    def test_absent_phrase_excluded(self):
        doc = "completely unrelated words here".split()
        assert present_keyphrases([["neural", "networks"]], doc) == []

    def test_order_must_be_contiguous(self):
        doc = "networks that are neural".split()
        assert present_keyphrases([["neural", "networks"]], doc) == []

    def test_subset_of_gold(self):
        gold = [["cats"], ["dogs"], ["parrots"]]
        doc = "cat meets dog".split()
        present = present_keyphrases(gold, doc)
        assert set(present) <= {("cat",), ("dog",), ("parrot",)}
        assert len(present) == 2


class TestF1AtK:
    def test_worked_example(self):
        gold = {("a",), ("b",), ("c",), ("d",)}
        preds = [["a"], ["x"], ["b"], ["y"], ["z"]]
        row = f1_at_k(preds, gold, k=5)
        assert row.precision == pytest.approx(0.4)
        assert row.recall == pytest.approx(0.5)
        assert row.f1 == pytest.approx(0.4444, abs=1e-4)

    def test_zero_matches(self):
        row = f1_at_k([["x"]], {("a",)}, k=5)
        assert row.f1 == 0.0

    def test_perfect_prediction(self):
        gold = {("a",), ("b",)}
        row = f1_at_k([["a"], ["b"]], gold, k=2)
        assert row.precision == row.recall == row.f1 == 1.0

    def test_duplicates_collapse_before_truncation(self):
        gold = {("run",), ("dog",)}
        preds = [["running"], ["runs"], ["dog"]]
        row = f1_at_k(preds, gold, k=2)
        assert row.matches == 2

    def test_extra_predictions_below_k_ignored(self):
        gold = {("a",)}
        base = f1_at_k([["a"], ["b"]], gold, k=2)
        widened = f1_at_k([["a"], ["b"], ["zzz"]], gold, k=2)
        assert (base.precision, base.recall) == (widened.precision, widened.recall)

    def test_short_prediction_list_divides_by_its_length(self):
        gold = {("a",), ("b",)}
        row = f1_at_k([["a"]], gold, k=10)
        assert row.precision == 1.0
        assert row.recall == 0.5


def synthetic_dataset():
    return [
        BenchmarkDocument(
            title="Redundancy pruning for keyphrase mining",
            abstract="We prune redundant keyphrases. Redundancy pruning "
                     "speeds up keyphrase mining on large collections.",
            gold_keyphrases=["redundancy pruning", "keyphrase mining"],
        ),
        BenchmarkDocument(
            title="Posting list intersection",
            abstract="Posting list intersection answers document frequency "
                     "queries. We intersect posting lists quickly.",
            gold_keyphrases=["posting list intersection", "document frequency"],
        ),
        BenchmarkDocument(
            title="Unrelated",
            abstract="Nothing matches here at all.",
            gold_keyphrases=["quantum chromodynamics"],
        ),
    ]


class TestRunBenchmark:
    def test_fully_predictable_doc_scores_one(self):
        docs = [BenchmarkDocument(
            title="",
            abstract="alpha beta. alpha beta. alpha beta gamma",
            gold_keyphrases=["alpha beta"],
        )]
        results = run_benchmark(docs, [1], stopword_lines=[])
        assert results[0].f1 == 1.0
        assert results[0].docs_evaluated == 1

    def test_skips_docs_without_present_gold(self):
        results = run_benchmark(synthetic_dataset(), [5], stopword_lines=["we", "on", "up", "at", "all"])
        res = results[0]
        assert res.docs_skipped == 1
        assert res.docs_evaluated == 2
        assert 0.0 <= res.precision <= 1.0
        assert 0.0 <= res.recall <= 1.0
        assert res.f1 <= max(res.precision, res.recall)

    def test_finds_the_obvious_phrases(self):
        results = run_benchmark(synthetic_dataset()[:2], [5],
                                stopword_lines=["we", "on", "up"])
        assert results[0].recall > 0.4

    def test_multiple_k_values(self):
        results = run_benchmark(synthetic_dataset(), [5, 10])
        assert [r.k for r in results] == [5, 10]
        assert all(r.f1 == 2 * r.precision * r.recall / (r.precision + r.recall)
                   for r in results if r.precision + r.recall > 0)


class TestDatasets:
    def test_jsonl_roundtrip(self, tmp_path):
        path = tmp_path / "data.jsonl"
        rows = [
            {"title": "T1", "abstract": "A1", "keyword": "k one;k two"},
            {"title": "T2", "abstract": "A2", "keywords": ["x", "y"]},
            {"title": "T3", "abstract": "A3", "keyword": ""},
        ]
        path.write_text("\n".join(json.dumps(r) for r in rows), "utf-8")
        docs = load_dataset(path)
        assert len(docs) == 2  # the empty-gold record is dropped
        assert docs[0].gold_keyphrases == ["k one", "k two"]
        assert docs[1].gold_keyphrases == ["x", "y"]

    def test_inspec_layout(self, tmp_path):
        (tmp_path / "1.abstr").write_text("A study of things\nMore text here", "utf-8")
        (tmp_path / "1.uncontr").write_text("thing study; more\n text", "utf-8")
        (tmp_path / "2.abstr").write_text("No gold for this one", "utf-8")
        docs = load_dataset(tmp_path)
        assert len(docs) == 1
        assert docs[0].gold_keyphrases == ["thing study", "more text"]

    def test_marked_txt_key_layout(self, tmp_path):
        (tmp_path / "7.txt").write_text(
            "--T\nA Title\n--A\nThe abstract body.\n--B\nBody ignored", "utf-8")
        (tmp_path / "7.key").write_text("first phrase\nsecond phrase\n", "utf-8")
        docs = load_dataset(tmp_path)
        assert docs == [BenchmarkDocument(
            title="A Title", abstract="The abstract body.",
            gold_keyphrases=["first phrase", "second phrase"])]

    def test_kwd_layout(self, tmp_path):
        (tmp_path / "d1.txt").write_text("Plain text document", "utf-8")
        (tmp_path / "d1.kwd").write_text("plain text\n", "utf-8")
        docs = load_dataset(tmp_path)
        assert docs[0].title == ""
        assert docs[0].gold_keyphrases == ["plain text"]

    def test_unknown_layout(self, tmp_path):
        (tmp_path / "mystery.bin").write_text("?", "utf-8")
        with pytest.raises(DatasetError):
            load_dataset(tmp_path)

    def test_bad_json_reports_line(self, tmp_path):
        path = tmp_path / "broken.jsonl"
        path.write_text('{"title": "ok", "keyword": "a", "abstract": "x"}\nnot json', "utf-8")
        with pytest.raises(DatasetError):
            load_dataset(path)

    def test_missing_path(self):
        with pytest.raises(FileNotFoundError):
            load_dataset("/nonexistent/nowhere")

    def test_crlf_files(self, tmp_path):
        (tmp_path / "1.txt").write_bytes(b"--T\r\nWindows Title\r\n--A\r\nBody text\r\n")
        (tmp_path / "1.key").write_bytes(b"body text\r\nwindows\r\n")
        docs = load_dataset(tmp_path)
        assert docs[0].title == "Windows Title"
        assert docs[0].gold_keyphrases == ["body text", "windows"]
