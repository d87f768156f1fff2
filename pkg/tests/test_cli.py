import subprocess
import sys

import pytest

from symkernel.cli import main, parse, read_config


@pytest.fixture
def out(tmp_path, monkeypatch):
    monkeypatch.delenv("SYMKERNEL_OUT", raising=False)
    return tmp_path / "out"


def report(path):
    return (path / "report.txt").read_text()


@pytest.mark.parametrize("argv", [
    ["rootinfo", "--space", "SL3R"],
    ["density", "--space", "H2"],
    ["partition", "--space", "SL3R", "--samples", "10000"],
    ["spherical", "--space", "H3"],
    ["subordination"],
    ["kunzestein", "--space", "H3"],
    ["admissible", "--d", "3", "--p", "2", "--q", "6"],
    ["decay", "--space", "H3", "--regime", "large"],
])
def test_subcommands_pass(out, argv):
    assert main(argv + ["--out", str(out)]) == 0
    text = report(out)
    assert "status=PASS" in text and "[FAIL]" not in text


def test_decay_report_contents(out):
    assert main(["decay", "--space", "H3", "--regime", "large", "--out", str(out)]) == 0
    text = report(out)
    assert "target=-1.5" in text and "lambda_max=" in text and "eps_schedule" in text
    header = (out / "decay.csv").read_text().splitlines()[0]
    assert header == "space,t,x_norm,re_value,im_value,abs_value,err_estimate,epsilon,lambda_max"


def test_assertion_failure_exits_one(out):
    # [1, 100] is pre-asymptotic for H2 (slope near -1.28), so the -1.5 +- 0.1 check fails
    assert main(["decay", "--space", "H2", "--regime", "large", "--t-min", "1", "--t-max", "100",
                 "--out", str(out)]) == 1
    assert "status=FAIL" in report(out)


@pytest.mark.parametrize("argv", [
    ["nosuch"],
    ["rootinfo", "--space", "H9"],
    ["decay", "--regime", "medium"],
    ["admissible", "--d", "2", "--p", "4", "--q", "4"],
    ["classify", "d=5", "gamma=1.8"],
    ["decay", "--per-decade", "0"],
])
def test_usage_errors_exit_two(out, argv):
    assert main(argv + ["--out", str(out)]) == 2


def test_classify_output(out, capsys):
    assert main(["classify", "d=5", "gamma=1.8", "class=L2", "size=small", "--out", str(out)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "globally well-posed; scatters"


def test_determinism(tmp_path, monkeypatch):
    monkeypatch.delenv("SYMKERNEL_OUT", raising=False)
    for name in ("a", "b"):
        assert main(["subordination", "--seed", "7", "--out", str(tmp_path / name)]) == 0
        assert main(["partition", "--space", "SL3R", "--seed", "7", "--out", str(tmp_path / name)]) == 0
    for f in ("subordination.csv", "partition.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    main(["subordination", "--seed", "8", "--out", str(tmp_path / "c")])
    assert (tmp_path / "c" / "subordination.csv").read_bytes() != (tmp_path / "a" / "subordination.csv").read_bytes()


def test_env_overrides_out(tmp_path, monkeypatch):
    env = tmp_path / "env"
    monkeypatch.setenv("SYMKERNEL_OUT", str(env))
    assert main(["rootinfo", "--out", str(tmp_path / "flag")]) == 0
    assert (env / "report.txt").exists()
    assert not (tmp_path / "flag").exists()


def test_config_file_and_override(tmp_path, out):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# subordination budget\nsamples = 5\nseed=3\n")
    assert read_config(cfg) == {"samples": "5", "seed": "3"}
    rc = parse(["subordination", "--config", str(cfg)])
    assert rc.seed == 3 and rc.options["samples"] == 5
    rc = parse(["subordination", "--config", str(cfg), "--seed", "9"])
    assert rc.seed == 9
    assert main(["subordination", "--config", str(cfg), "--out", str(out)]) == 0
    assert len((out / "subordination.csv").read_text().splitlines()) == 6
    bad = tmp_path / "bad.cfg"
    bad.write_text("regime=large\n")
    assert main(["subordination", "--config", str(bad)]) == 2


def test_plot_decay_and_partition(out):
    assert main(["decay", "--space", "H3", "--regime", "small", "--out", str(out)]) == 0
    assert main(["plot", str(out / "decay.csv")]) == 0
    assert (out / "decay.png").stat().st_size > 0
    assert (out / "report.txt").read_text().startswith("experiment=decay")
    assert main(["partition", "--space", "SL3R", "--out", str(out)]) == 0
    assert main(["plot", str(out / "partition.csv")]) == 0
    assert (out / "partition.png").stat().st_size > 0


def test_plot_missing_column(tmp_path, out, capsys):
    csv = tmp_path / "broken.csv"
    csv.write_text("space,t,x_norm,re_value,im_value,err_estimate,epsilon,lambda_max\nH3,1,0,1,0,0,0,1\n")
    assert main(["plot", str(csv)]) == 2
    assert "abs_value" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "symkernel", "rootinfo", "--space", "H5", "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "d=5 D=3" in (tmp_path / "report.txt").read_text()
