import json
import logging

import pytest

import main
from src.corpus import load_annotations
from src.errors import DataError
from src.models import load_model
from utils.manifest import MANIFEST_SUFFIX


def run(*argv):
    return main.run(list(argv))


def paths(corpus_dir):
    return str(corpus_dir / "articles"), str(corpus_dir / "si.labels"), str(corpus_dir / "tc.labels")


def read_manifest(output):
    with open(output + MANIFEST_SUFFIX, encoding="utf-8") as f:
        return json.load(f)


def test_split_train_dev():
    items = [str(i) for i in range(10)]
    train, dev = main.split_train_dev(items, 0.9, 13)
    assert len(train) == 9 and len(dev) == 1
    assert sorted(train + dev) == sorted(items)
    assert train == sorted(train)
    assert main.split_train_dev(items, 0.9, 13) == (train, dev)

    assert main.split_train_dev(items, 1.0, 4) == (sorted(items), [])
    assert len(main.split_train_dev(items, 0.25, 4)[0]) == 3


def test_split_train_dev_errors():
    with pytest.raises(DataError):
        main.split_train_dev([], 0.9, 1)
    with pytest.raises(ValueError):
        main.split_train_dev(["1"], 0.0, 1)


def test_help_and_usage_errors(capsys):
    assert run("--help") == 0
    assert "score-si" in capsys.readouterr().out
    assert run("bogus") == 1
    assert run("score-si", "--pred", "x") == 1
    assert run("convert-tags", "--from", "PNP", "--to", "XYZ", "--input", "x") == 1
    assert "usage error" in capsys.readouterr().err


def test_missing_input_is_data_error(tmp_path, capsys):
    assert run("score-si", "--pred", str(tmp_path / "none"), "--gold", str(tmp_path / "none")) == 2
    assert run("convert-tags", "--from", "PNP", "--to", "BIO", "--input", str(tmp_path / "none")) == 2
    assert "error" in capsys.readouterr().err


def test_ingest(corpus_dir, capsys):
    articles, si, tc = paths(corpus_dir)
    assert run("ingest", "--articles", articles, "--labels", tc, "--quiet") == 0
    out = capsys.readouterr().out
    assert any(line.startswith("  articles") and line.endswith(" 10") for line in out.splitlines())
    assert "Loaded_Language" in out


def test_score_si_self_comparison(corpus_dir, capsys):
    _, si, _ = paths(corpus_dir)
    report = str(corpus_dir / "out" / "si_score.tsv")
    assert run("score-si", "--pred", si, "--gold", si, "--output", report) == 0
    assert "F1:        1.0000" in capsys.readouterr().out
    with open(report, encoding="utf-8") as f:
        assert f.readline().startswith("metric\tvalue")
    assert read_manifest(report)["command"] == "score-si"


def test_score_tc_self_comparison(corpus_dir, capsys):
    _, _, tc = paths(corpus_dir)
    report = str(corpus_dir / "tc_score.tsv")
    assert run("score-tc", "--pred", tc, "--gold", tc, "--output", report) == 0
    assert "micro F1: 1.0000" in capsys.readouterr().out
    with open(report, encoding="utf-8") as f:
        lines = f.read().splitlines()
    assert lines[:2] == ["metric\tvalue", "micro_f1\t1.000000"]
    table = lines[lines.index("class\tprecision\trecall\tf1\tsupport") + 1:]
    assert [row.split("\t")[0] for row in table] == ["Loaded_Language", "Name_Calling,Labeling"]
    assert all(row.split("\t")[1:4] == ["1.000000"] * 3 for row in table)


def test_convert_tags(tmp_path):
    source = tmp_path / "tags.txt"
    source.write_text("O P P P O\nP\n", encoding="utf-8")
    output = str(tmp_path / "bioes.txt")
    assert run("convert-tags", "--from", "PNP", "--to", "BIOES", "--input", str(source), "--output", output) == 0
    with open(output, encoding="utf-8") as f:
        assert f.read() == "O B I E O\nS\n"
    manifest = read_manifest(output)
    assert manifest["inputs"]["input"]["path"] == str(source)
    assert manifest["output"]["path"] == output


def test_convert_tags_reports_bad_line(tmp_path, capsys):
    source = tmp_path / "tags.txt"
    source.write_text("O P\nO X\n", encoding="utf-8")
    assert run("convert-tags", "--from", "PNP", "--to", "BIO", "--input", str(source)) == 2
    assert "tags.txt:2:" in capsys.readouterr().err


def test_encode_decode_round_trip(corpus_dir):
    articles, si, _ = paths(corpus_dir)
    tags = str(corpus_dir / "tags.txt")
    decoded = str(corpus_dir / "decoded.labels")
    assert run("encode-tags", "--articles", articles, "--labels", si, "--scheme", "BIOE",
               "--output", tags, "--quiet") == 0
    assert run("decode-tags", "--articles", articles, "--tags", tags, "--scheme", "BIOE",
               "--output", decoded, "--quiet") == 0
    assert set(load_annotations(decoded)) == set(load_annotations(si))


def test_decode_tags_line_count_mismatch(corpus_dir):
    articles, _, _ = paths(corpus_dir)
    tags = corpus_dir / "short.txt"
    tags.write_text("O O\n", encoding="utf-8")
    assert run("decode-tags", "--articles", articles, "--tags", str(tags), "--quiet") == 2


def test_extract_context(corpus_dir):
    articles, _, tc = paths(corpus_dir)
    output = str(corpus_dir / "pairs.tsv")
    assert run("extract-context", "--articles", articles, "--labels", tc, "--context", "title",
               "--output", output, "--quiet") == 0
    with open(output, encoding="utf-8") as f:
        rows = f.read().splitlines()
    assert len(rows) == len(load_annotations(tc))
    assert all(row.split("\t")[4] == "TITLE" for row in rows)
    assert read_manifest(output)["config"]["context_kind"] == "title"


def test_stats_writes_csv_files(corpus_dir, capsys):
    articles, si, tc = paths(corpus_dir)
    out_dir = corpus_dir / "stats"
    assert run("stats", "--labels", tc, "--articles", articles, "--unit", "WORDS", "--bin-width", "1",
               "--pred", si, "--output-dir", str(out_dir), "--quiet") == 0
    histogram = (out_dir / "class_histogram.csv").read_text(encoding="utf-8").splitlines()
    assert histogram[0] == "technique,count"
    assert {row.split(",")[0] for row in histogram[1:]} == {"Loaded_Language", '"Name_Calling,Labeling"'}
    lengths = (out_dir / "span_lengths.csv").read_text(encoding="utf-8").splitlines()
    assert lengths[0] == "group,bin_low,bin_high,count"
    assert {int(row.split(",")[-3]) for row in lengths[1:]} <= {1, 2, 3}
    assert "difference" in capsys.readouterr().out


def test_stats_rejects_unknown_unit(corpus_dir):
    _, _, tc = paths(corpus_dir)
    assert run("stats", "--labels", tc, "--unit", "LINES", "--output-dir", str(corpus_dir / "s")) == 1


def test_train_and_predict_si(corpus_dir):
    articles, si, _ = paths(corpus_dir)
    model = str(corpus_dir / "si.model")
    predictions = str(corpus_dir / "si_pred.labels")
    assert run("train-si", "--articles", articles, "--labels", si, "--epochs", "3", "--dim", "64",
               "--output", model, "--quiet") == 0
    manifest = read_manifest(model)
    assert manifest["command"] == "train-si"
    assert set(manifest["inputs"]) == {"articles", "labels"}
    assert manifest["config"]["epochs"] == 3

    assert run("predict-si", "--articles", articles, "--model", model, "--output", predictions, "--quiet") == 0
    assert all(a.technique is None for a in load_annotations(predictions))
    assert read_manifest(predictions)["inputs"]["model"]["path"] == model


def test_train_and_predict_tc(corpus_dir):
    articles, si, tc = paths(corpus_dir)
    model = str(corpus_dir / "tc.model")
    predictions = str(corpus_dir / "tc_pred.labels")
    assert run("train-tc", "--articles", articles, "--labels", tc, "--epochs", "3", "--dim", "64",
               "--strategy", "WEIGHTED_AVG", "--alpha", "0.7", "--output", model, "--quiet") == 0
    assert run("predict-tc", "--articles", articles, "--labels", si, "--model", model,
               "--output", predictions, "--quiet") == 0
    predicted = load_annotations(predictions)
    assert len(predicted) == len(load_annotations(si))
    assert {a.technique for a in predicted} <= {"Loaded_Language", "Name_Calling,Labeling"}


def test_predict_with_wrong_model_type(corpus_dir):
    articles, si, _ = paths(corpus_dir)
    model = str(corpus_dir / "si.model")
    assert run("train-si", "--articles", articles, "--labels", si, "--epochs", "1", "--dim", "32",
               "--output", model, "--quiet") == 0
    assert run("predict-tc", "--articles", articles, "--labels", si, "--model", model, "--quiet") == 2


def test_bad_strategy_options_are_usage_errors(corpus_dir):
    articles, _, tc = paths(corpus_dir)
    model = str(corpus_dir / "tc.model")
    assert run("train-tc", "--articles", articles, "--labels", tc, "--strategy", "BOGUS",
               "--output", model, "--quiet") == 1
    assert run("train-tc", "--articles", articles, "--labels", tc, "--split", "1.5",
               "--output", model, "--quiet") == 1
    assert run("train-tc", "--articles", articles, "--labels", tc, "--strategy", "WEIGHTED_AVG", "--alpha", "1.5",
               "--output", model, "--quiet") == 1


def test_seed_precedence(tmp_path, monkeypatch):
    source = tmp_path / "tags.txt"
    source.write_text("O P\n", encoding="utf-8")
    output = str(tmp_path / "out.txt")
    base = ["convert-tags", "--from", "PNP", "--to", "BIO", "--input", str(source), "--output", output]

    monkeypatch.setenv("SPANTAG_SEED", "21")
    assert run(*base) == 0
    assert read_manifest(output)["seed"] == 21

    settings = tmp_path / "run.cfg"
    settings.write_text("# overrides\nseed = 7\nscheme=BIOES\n", encoding="utf-8")
    assert run(*base, "--config", str(settings)) == 0
    manifest = read_manifest(output)
    assert manifest["seed"] == 7
    assert manifest["config"]["scheme"] == "BIOES"
    assert "config" in manifest["inputs"]

    assert run(*base, "--config", str(settings), "--seed", "3") == 0
    assert read_manifest(output)["seed"] == 3


def test_bad_config_files(tmp_path):
    source = tmp_path / "tags.txt"
    source.write_text("O\n", encoding="utf-8")
    base = ["convert-tags", "--from", "PNP", "--to", "BIO", "--input", str(source)]
    unknown = tmp_path / "unknown.cfg"
    unknown.write_text("colour=blue\n", encoding="utf-8")
    assert run(*base, "--config", str(unknown)) == 1
    malformed = tmp_path / "malformed.cfg"
    malformed.write_text("seed\n", encoding="utf-8")
    assert run(*base, "--config", str(malformed)) == 1
    assert run(*base, "--config", str(tmp_path / "missing.cfg")) == 1


def test_replay_reproduces_training(corpus_dir):
    articles, si, _ = paths(corpus_dir)
    first = str(corpus_dir / "first.model")
    second = str(corpus_dir / "second.model")
    assert run("train-si", "--articles", articles, "--labels", si, "--epochs", "2", "--dim", "64",
               "--seed", "5", "--output", first, "--quiet") == 0
    assert run("replay", "--manifest", first + MANIFEST_SUFFIX, "--output", second) == 0
    with open(first, "rb") as a, open(second, "rb") as b:
        assert a.read() == b.read()
    assert read_manifest(second)["seed"] == 5


def test_replay_refuses_changed_inputs(corpus_dir, capsys):
    articles, si, _ = paths(corpus_dir)
    model = str(corpus_dir / "si.model")
    assert run("train-si", "--articles", articles, "--labels", si, "--epochs", "1", "--dim", "32",
               "--output", model, "--quiet") == 0
    with open(si, "a", encoding="utf-8") as f:
        f.write("700\t0\t3\n")
    assert run("replay", "--manifest", model + MANIFEST_SUFFIX) == 2
    assert "labels" in capsys.readouterr().err


def test_replay_missing_manifest(tmp_path):
    assert run("replay", "--manifest", str(tmp_path / "none.manifest.json")) == 2


def test_hidden_dim_must_be_below_encoder_dim(corpus_dir):
    articles, _, tc = paths(corpus_dir)
    assert run("train-tc", "--articles", articles, "--labels", tc, "--strategy", "CONCAT_EMBED_HIDDEN",
               "--hidden-dim", "64", "--dim", "64", "--output", str(corpus_dir / "tc.model"), "--quiet") == 1


def write_mixed_labels(corpus_dir):
    techniques = ["Loaded_Language", "Doubt", "Slogans", "Appeal_to_Authority"]
    _, si, _ = paths(corpus_dir)
    rows = [f"{a.article_id}\t{techniques[i % 4]}\t{a.span.begin}\t{a.span.end}\n"
            for i, a in enumerate(load_annotations(si))]
    labels = corpus_dir / "mixed.labels"
    labels.write_text("".join(rows), encoding="utf-8")
    return str(labels)


def test_train_tc_per_category(corpus_dir):
    articles, _, tc = paths(corpus_dir)
    labels = write_mixed_labels(corpus_dir)
    for category, names in (("1", ("Loaded_Language", "Slogans")), ("2", ("Appeal_to_Authority", "Doubt"))):
        model = str(corpus_dir / f"tc{category}.model")
        assert run("train-tc", "--articles", articles, "--labels", labels, "--category", category,
                   "--epochs", "2", "--dim", "32", "--output", model, "--quiet") == 0
        assert load_model(model).inventory.names == names
        assert "--category" in read_manifest(model)["argv"]

    model = str(corpus_dir / "none.model")
    assert run("train-tc", "--articles", articles, "--labels", tc, "--category", "2",
               "--output", model, "--quiet") == 2
    assert run("train-tc", "--articles", articles, "--labels", tc, "--category", "3",
               "--output", model, "--quiet") == 1


def test_train_tc_from_extracted_pairs(corpus_dir):
    articles, _, tc = paths(corpus_dir)
    pairs = str(corpus_dir / "pairs.tsv")
    model = str(corpus_dir / "tc.model")
    assert run("extract-context", "--articles", articles, "--labels", tc, "--output", pairs, "--quiet") == 0
    assert run("train-tc", "--pairs", pairs, "--epochs", "2", "--dim", "32", "--output", model, "--quiet") == 0
    assert load_model(model).inventory.names == ("Loaded_Language", "Name_Calling,Labeling")
    assert set(read_manifest(model)["inputs"]) == {"pairs"}

    assert run("train-tc", "--pairs", pairs, "--labels", tc, "--output", model, "--quiet") == 1
    assert run("train-tc", "--output", model, "--quiet") == 1


def test_ingest_warns_about_unknown_techniques(corpus_dir, caplog):
    articles, si, _ = paths(corpus_dir)
    labels = corpus_dir / "odd.labels"
    first = load_annotations(si)[0]
    labels.write_text(f"{first.article_id}\tMade_Up\t{first.span.begin}\t{first.span.end}\n", encoding="utf-8")
    with caplog.at_level(logging.WARNING):
        assert run("ingest", "--articles", articles, "--labels", str(labels), "--quiet") == 0
    assert "Made_Up" in caplog.text


def test_replay_reproduces_predictions(corpus_dir):
    articles, si, tc = paths(corpus_dir)
    si_model = str(corpus_dir / "si.model")
    tc_model = str(corpus_dir / "tc.model")
    assert run("train-si", "--articles", articles, "--labels", si, "--epochs", "2", "--dim", "32",
               "--output", si_model, "--quiet") == 0
    assert run("train-tc", "--articles", articles, "--labels", tc, "--epochs", "2", "--dim", "32",
               "--output", tc_model, "--quiet") == 0

    runs = (("predict-si", "--articles", articles, "--model", si_model),
            ("predict-tc", "--articles", articles, "--labels", si, "--model", tc_model))
    for argv in runs:
        first = str(corpus_dir / f"{argv[0]}.first")
        second = str(corpus_dir / f"{argv[0]}.second")
        assert run(*argv, "--output", first, "--quiet") == 0
        assert run("replay", "--manifest", first + MANIFEST_SUFFIX, "--output", second) == 0
        with open(first, "rb") as a, open(second, "rb") as b:
            assert a.read() == b.read()
