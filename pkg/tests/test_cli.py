import pytest

from wcgames import __version__
from wcgames.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_bounds_table(capsys):
    rc, out, _ = run(capsys, "bounds", "--n", "10", "--k", "2", "--game", "ksat")
    assert rc == 0
    rows = {line.split(",")[0]: line.split(",") for line in out.splitlines()[2:]}
    assert float(rows["ksat-cw-below"][-1]) == 4.5
    assert rows["ksat-cw-below"][5] == "<"
    assert float(rows["ksat-wc-below"][-1]) == 2.25
    assert len(rows) == 4


def test_play_transcript(capsys):
    rc, out, _ = run(capsys, "play", "--n", "5", "--k", "2", "--q", "2", "--waiter", "wc-waiter-potential")
    assert rc == 0 and "winner" in out


def test_sweep_csv_reproducible(capsys):
    argv = ("sweep", "--n", "5", "--q-min", "1", "--q-max", "2", "--reps", "4", "--seed", "9")
    rc, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert rc == 0 and a == b
    lines = a.splitlines()
    assert lines[0].startswith(f"# wcgames version={__version__}")
    assert len(lines) == 4


def test_sweep_to_env_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("WCGAMES_OUT_DIR", str(tmp_path))
    rc, out, err = run(capsys, "sweep", "--n", "4", "--q", "1", "--reps", "2")
    assert rc == 0 and out == ""
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].read_text().startswith("# wcgames")


def test_config_file_with_flag_override(capsys, tmp_path):
    conf = tmp_path / "c.cfg"
    out = tmp_path / "sub" / "r.csv"
    conf.write_text(f"game=ksat\nversion=cw\nn=4\nk=2\nq=2\nreps=3\nout={out}\n")
    rc, _, _ = run(capsys, "sweep", "--config", str(conf), "--reps", "2")
    assert rc == 0
    text = out.read_text().splitlines()
    assert '"game": "ksat"' in text[0] and '"reps": 2' in text[0]
    assert text[2].split(",")[:2] == ["2", "2"]


def test_bisect(capsys):
    rc, out, _ = run(capsys, "bisect", "--n", "4", "--q-min", "1", "--q-max", "4", "--reps", "10",
                     "--family", "clique", "--objective", "transversal", "--scan")
    assert rc == 0 and "q_star=" in out


def test_solve_and_threshold(capsys):
    rc, out, _ = run(capsys, "solve", "--n", "4", "--q", "1", "--family", "clique", "--objective", "transversal")
    assert rc == 0 and "winner=client" in out
    rc, out, _ = run(capsys, "solve", "--n", "4", "--q-min", "1", "--q-max", "2", "--threshold",
                     "--family", "clique", "--objective", "transversal")
    assert rc == 0 and "q=1\tclient" in out and "q=2\tclient" in out


def test_solve_budget_error(capsys):
    rc, _, err = run(capsys, "solve", "--n", "5", "--q", "1", "--budget", "5")
    assert rc == 2 and "budget" in err


def test_baseline(capsys):
    rc, out, _ = run(capsys, "baseline", "--game", "ksat", "--n", "4", "--k", "2", "--reps", "10",
                     "--m-min", "0", "--m-max", "24", "--m-step", "4")
    assert rc == 0
    assert out.splitlines()[1] == "m,density,reps,with_property,fraction"
    assert "crossing" in out


@pytest.mark.parametrize("argv", [("sweep", "--waiter", "nobody"), ("sweep", "--n", "1"),
                                  ("play", "--objective", "contain"),
                                  ("sweep", "--config", "/nonexistent/cfg")])
def test_errors_exit_2(capsys, argv):
    rc, _, err = run(capsys, *argv)
    assert rc == 2 and err.startswith(f"wcgames {argv[0]}: error:")


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as e:
        main(["-V"])
    assert e.value.code == 0
    assert __version__ in capsys.readouterr().out
