import json

import pytest

from semcom.cli import (
    EXIT_INFEASIBLE,
    EXIT_INPUT,
    EXIT_OK,
    build_parser,
    load_language_model,
    main,
    save_language_model,
)
from semcom.lm import NGramLanguageModel


@pytest.fixture()
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main([
        "make-corpus", "--seed", "3", "--n", "120",
        "--out", "corpus.txt", "--kb-out", "kb.json",
    ]) == EXIT_OK
    return tmp_path


def run_twice(argv, out_a, out_b):
    assert main(argv + ["--out", str(out_a)]) == EXIT_OK
    assert main(argv + ["--out", str(out_b)]) == EXIT_OK
    return out_a.read_bytes() == out_b.read_bytes()


class TestDeterminism:
    def test_make_corpus(self, workdir):
        assert run_twice(
            ["make-corpus", "--seed", "3", "--n", "50"],
            workdir / "c1.txt", workdir / "c2.txt",
        )

    def test_ingest(self, workdir):
        assert run_twice(
            ["ingest", "corpus.txt"], workdir / "v1.csv", workdir / "v2.csv"
        )

    def test_run(self, workdir):
        assert run_twice(
            ["run", "corpus.txt", "--kb", "kb.json", "--rho", "0.5",
             "--scheme", "ordered", "--snr-db", "6"],
            workdir / "r1.csv", workdir / "r2.csv",
        )

    def test_sweep(self, workdir):
        assert run_twice(
            ["sweep", "--corpus", "corpus.txt", "--kb", "kb.json",
             "--scheme", "random", "--rho-grid", "0,1", "--seeds", "2"],
            workdir / "s1.csv", workdir / "s2.csv",
        )

    def test_optimize(self, workdir):
        assert run_twice(
            ["optimize", "--corpus", "corpus.txt", "--kb", "kb.json",
             "--tau", "0.3", "--snr-db", "inf", "--rho-grid", "0,0.5,1"],
            workdir / "o1.csv", workdir / "o2.csv",
        )

    def test_verify_bound(self, workdir):
        assert run_twice(
            ["verify-bound", "--trials", "50", "--support", "4"],
            workdir / "b1.csv", workdir / "b2.csv",
        )

    def test_train(self, workdir):
        assert main(["train", "corpus.txt", "--kb", "kb.json",
                     "--out-dir", "m1"]) == EXIT_OK
        assert main(["train", "corpus.txt", "--kb", "kb.json",
                     "--out-dir", "m2"]) == EXIT_OK
        assert (workdir / "m1/lm.json").read_bytes() == (workdir / "m2/lm.json").read_bytes()
        assert (
            (workdir / "m1/train_reconstructions.txt").read_bytes()
            == (workdir / "m2/train_reconstructions.txt").read_bytes()
        )


class TestOutputs:
    def test_verify_bound_row_count_and_summary(self, workdir, capsys):
        assert main(["verify-bound", "--trials", "200", "--support", "5",
                     "--out", "bound.csv"]) == EXIT_OK
        lines = (workdir / "bound.csv").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 201
        out = capsys.readouterr().out
        assert "gap signs over 200 trials" in out

    def test_channel_test_reports_rates(self, capsys):
        assert main(["channel-test", "--snr-db", "6", "--bits", "100000"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "empirical_ber" in out
        assert "theoretical_ber" in out
        assert "relative_difference" in out

    def test_resolved_config_logged(self, workdir, capsys):
        main(["ingest", "corpus.txt", "--out", "v.csv"])
        err = capsys.readouterr().err
        assert err.startswith("config ingest:")
        json.loads(err.split(":", 1)[1])


class TestExitCodes:
    def test_missing_corpus_is_input_error(self, workdir):
        assert main(["run", "nope.txt", "--kb", "kb.json"]) == EXIT_INPUT

    def test_bad_kb_is_input_error(self, workdir):
        (workdir / "bad.json").write_text("{}", encoding="utf-8")
        assert main(["run", "corpus.txt", "--kb", "bad.json"]) == EXIT_INPUT

    def test_usage_error_is_exit_2(self):
        with pytest.raises(SystemExit) as info:
            main(["run"])  # missing required arguments
        assert info.value.code == 2

    def test_infeasible_optimization_is_exit_4(self, workdir):
        assert main([
            "optimize", "--corpus", "corpus.txt", "--kb", "kb.json",
            "--tau", "0.9999", "--rho-grid", "0,1", "--snr-db", "0",
            "--seeds", "2",
        ]) == EXIT_INFEASIBLE


class TestConfigFile:
    def test_config_supplies_defaults_flags_win(self, workdir, capsys):
        (workdir / "cfg.json").write_text(
            json.dumps({"rho": 0.5, "scheme": "random"}), encoding="utf-8"
        )
        assert main(["run", "corpus.txt", "--kb", "kb.json",
                     "--config", "cfg.json", "--rho", "1.0",
                     "--out", "r.csv"]) == EXIT_OK
        err = capsys.readouterr().err
        resolved = json.loads(err.split(":", 1)[1])
        assert resolved["rho"] == 1.0       # flag beats config
        assert resolved["scheme"] == "random"  # config beats default


class TestHelp:
    def test_every_subcommand_lists_defaults(self, capsys):
        parser = build_parser()
        for cmd in ["make-corpus", "ingest", "train", "run", "sweep",
                    "optimize", "verify-bound", "channel-test"]:
            with pytest.raises(SystemExit) as info:
                parser.parse_args([cmd, "--help"])
            assert info.value.code == 0
            out = capsys.readouterr().out
            assert "default" in out


class TestModelPersistence:
    def test_language_model_roundtrip(self, tmp_path, football_corpus):
        lm = NGramLanguageModel(order=3).fit(football_corpus)
        path = tmp_path / "lm.json"
        save_language_model(lm, path)
        again = load_language_model(path)
        assert again.order == lm.order
        assert again.vocab_ == lm.vocab_
        for ctx in [(), ("the",), ("the", "ball")]:
            assert again.continuation_counts(ctx) == lm.continuation_counts(ctx)
            for w in list(lm.vocab_)[:10]:
                assert again.prob(w, ctx) == pytest.approx(lm.prob(w, ctx))

    def test_unknown_format_rejected(self, tmp_path):
        path = tmp_path / "lm.json"
        path.write_text('{"format": "other"}', encoding="utf-8")
        with pytest.raises(ValueError):
            load_language_model(path)
