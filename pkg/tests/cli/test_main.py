import json

import pytest

from memrc.cli.main import EXIT_FAILURE, EXIT_INGESTION, EXIT_OK, EXIT_USAGE, build_parser, main
from memrc.cli.selftest import CHECKS
from memrc.readout.checkpoint import load_checkpoint


@pytest.fixture(autouse=True)
def _env(mock_env):
    yield


def _artifact_rows(path):
    return [line.split(",") for line in path.read_text().splitlines() if not line.startswith("#")]


@pytest.mark.parametrize("argv", [[], ["bogus"], ["energy"], ["states", "--runs", "0"]])
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_help_is_not_an_error(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "selftest" in capsys.readouterr().out


def test_global_flags_after_the_subcommand():
    args = build_parser().parse_args(["--seed", "1", "energy", "--task", "speech", "--out", "x"])
    assert args.seed == 1
    assert args.out == "x"


def test_selftest_passes(capsys):
    assert main(["selftest"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == len(CHECKS)
    assert all(line.startswith("PASS") for line in lines)


def test_energy_report(tmp_path, capsys):
    assert main(["energy", "--task", "timeseries", "--out", str(tmp_path)]) == EXIT_OK
    assert "3,057,553" in capsys.readouterr().out
    rows = _artifact_rows(tmp_path / "energy_timeseries.csv")
    assert rows[-1][0] == "published"
    assert (tmp_path / "config.json").exists()


def test_seed_flag_reaches_the_emitted_config(tmp_path):
    assert main(["energy", "--task", "speech", "--seed", "5", "--out", str(tmp_path)]) == EXIT_OK
    assert json.loads((tmp_path / "config.json").read_text())["seed"] == 5


def test_states_dump(tmp_path, capsys):
    out = tmp_path / "states.csv"
    assert main(["states", "--device", "2", "--runs", "2", "--out", str(out)]) == EXIT_OK
    rows = _artifact_rows(out)
    assert rows[0] == ["code", "read1", "read2", "read3", "read4"]
    assert len(rows[1:]) == 16
    assert all(len(row) == 5 for row in rows[1:])
    assert "1111" in capsys.readouterr().out


def test_states_dump_into_a_directory(tmp_path):
    assert main(["states", "--runs", "1", "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "states_device0.csv").exists()
    # a single run has no spread to report
    assert not (tmp_path / "states_device0_spread.csv").exists()


def test_states_spread_next_to_the_table(tmp_path):
    out = tmp_path / "states.csv"
    assert main(["states", "--runs", "16", "--out", str(out)]) == EXIT_OK
    rows = _artifact_rows(tmp_path / "states_spread.csv")
    assert rows[0] == ["code", "spread1", "spread2", "spread3", "spread4"]
    assert [row[0] for row in rows[1:]] == [format(code, "04b") for code in range(16)]
    spreads = [float(value) for row in rows[1:] for value in row[1:]]
    assert all(0 < value <= 2 * 0.02 for value in spreads)


def test_synapse_statistics(tmp_path, capsys):
    assert main(["synapse", "--out", str(tmp_path)]) == EXIT_OK
    rows = _artifact_rows(tmp_path / "synapse_pd.csv")
    assert rows[0][:2] == ["pulse", "direction"]
    assert len(rows[1:]) == 91
    assert rows[1][1] == "start"
    assert rows[46][1] == "potentiation"
    assert rows[47][1] == "depression"
    assert all(float(row[-1]) < 0.04 for row in rows[1:])
    assert "cycles=100" in capsys.readouterr().out
    assert not (tmp_path / "synapse_array.csv").exists()


def test_synapse_array_curves(tmp_path):
    argv = ["synapse", "--cycles", "2", "--array", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    rows = _artifact_rows(tmp_path / "synapse_array.csv")
    assert rows[0] == ["row", "col", "pulse", "conductance_s"]
    assert len(rows[1:]) == 16 * 16 * 91


def test_missing_dataset_is_an_ingestion_error(tmp_path, capsys):
    argv = ["fsdd", "--data", str(tmp_path / "nowhere"), "--out", str(tmp_path)]
    assert main(argv) == EXIT_INGESTION
    assert "FSDD directory not found" in capsys.readouterr().err


def test_fsdd_without_any_dataset_names_the_variable(mock_env, tmp_path, capsys):
    assert main(["fsdd", "--out", str(tmp_path)]) == EXIT_INGESTION
    assert "MEMRC_DATA" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["--config", str(tmp_path / "absent.json"), "selftest"]) == EXIT_INGESTION


def test_unknown_config_key(tmp_path, capsys):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"energy": {"watts": 1}}))
    assert main(["--config", str(path), "energy", "--task", "speech"]) == EXIT_FAILURE
    assert "energy.watts" in capsys.readouterr().err


def test_timeseries_run(tmp_path, capsys):
    argv = ["timeseries", "--steps", "100", "--epochs", "1", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    assert "nrmse=" in capsys.readouterr().out
    trace = _artifact_rows(tmp_path / "timeseries_trace.csv")
    assert trace[0] == ["k", "y", "y_hat"]
    assert len(trace) == 1 + 20
    metrics = json.loads((tmp_path / "timeseries_metrics.json").read_text())
    assert metrics["metrics"]["num_train"] == 80
    assert not (tmp_path / "timeseries_online_errors.csv").exists()
    net, digest = load_checkpoint(tmp_path / "timeseries_readout.json")
    assert net.sizes == [20, 128, 64, 1]
    assert digest == metrics["meta"]["config_hash"]


def test_online_timeseries_run(tmp_path):
    argv = ["timeseries", "--mode", "online", "--steps", "60", "--epochs", "1"]
    assert main([*argv, "--out", str(tmp_path)]) == EXIT_OK
    rows = _artifact_rows(tmp_path / "timeseries_online_errors.csv")
    assert rows[0] == ["step", "abs_error", "cumulative_error"]
    assert len(rows) == 1 + 48


def test_fsdd_run(tmp_path, fsdd_dir, capsys):
    out = tmp_path / "results"
    assert main(["fsdd", "--data", str(fsdd_dir), "--epochs", "1", "--out", str(out)]) == EXIT_OK
    assert "accuracy=" in capsys.readouterr().out
    confusion = _artifact_rows(out / "fsdd_confusion.csv")
    assert len(confusion) == 11
    metrics = json.loads((out / "fsdd_metrics.json").read_text())
    assert metrics["metrics"]["num_test"] == 6
    assert metrics["metrics"]["config_hash"] == metrics["meta"]["config_hash"]


def test_sclcfit(tmp_path, capsys):
    path = tmp_path / "iv.csv"
    rows = [f"{v / 10:.1f},{1e-6 * (v / 10) ** 2:.6e},HRS" for v in range(1, 11)]
    path.write_text("voltage,current,branch\n" + "\n".join(rows) + "\n")
    argv = ["sclcfit", "--input", str(path), "--breakpoints", "auto", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    assert "sclc" in capsys.readouterr().out
    fits = _artifact_rows(tmp_path / "sclc_fits.csv")
    assert fits[1][0] == "HRS"
    assert fits[1][-1] == "sclc"


def test_sclcfit_bad_breakpoints(tmp_path):
    path = tmp_path / "iv.csv"
    path.write_text("voltage,current\n0.1,1\n0.2,2\n0.3,3\n")
    argv = ["sclcfit", "--input", str(path), "--breakpoints", "half", "--out", str(tmp_path)]
    assert main(argv) == EXIT_FAILURE


def test_sclcfit_missing_input(tmp_path):
    argv = ["sclcfit", "--input", str(tmp_path / "none.csv"), "--out", str(tmp_path)]
    assert main(argv) == EXIT_INGESTION
