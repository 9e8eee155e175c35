from __future__ import annotations

import json
import math
from pathlib import Path

import pytest

from sincsmooth.config import Settings
from sincsmooth.core.types import EstimatorConfig, GridAxis, OrdinarySmooth, Supersmooth
from sincsmooth.density import density_at
from sincsmooth.errors import DomainError
from sincsmooth.ingest import load_sample, read_table
from sincsmooth.runner import (
    SCHEMA_VERSION,
    Command,
    RunConfig,
    parse_grid,
    parse_overrides,
    parse_rule,
    run,
)


@pytest.fixture
def settings(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> Settings:
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("SINCSMOOTH_THREADS", "1")
    return Settings()


def _summary(text: str) -> dict[str, object]:
    (line,) = [line for line in text.splitlines() if line.startswith("{")]
    return json.loads(line)


def _simulate(tmp_path: Path, settings: Settings, example: int, n: int, **extra: object) -> Path:
    path = tmp_path / f"example{example}.csv"
    cfg = RunConfig(Command.SIMULATE, output_path=str(path), example=example, n=n, seed=1, **extra)
    assert run(cfg, settings) == 0
    return path


def test_parse_rule() -> None:
    assert parse_rule("super:2:0.5") == Supersmooth(alpha=2.0, c1=0.5)
    assert parse_rule("ordinary:3") == OrdinarySmooth(beta=3.0)
    for text in ("super:x:1", "ordinary:1", "gauss:1", "super:2"):
        with pytest.raises(DomainError):
            parse_rule(text)


def test_parse_grid() -> None:
    assert parse_grid("-1:1:5") == GridAxis(-1.0, 1.0, 5)
    for text in ("1:2", "0:1:x", "1:0:3", "0:1:0"):
        with pytest.raises(DomainError):
            parse_grid(text)


def test_parse_overrides() -> None:
    assert parse_overrides(("h=0.2", " sd = 1")) == {"h": 0.2, "sd": 1.0}
    for pair in ("h", "=1", "h=abc"):
        with pytest.raises(DomainError):
            parse_overrides((pair,))


def test_simulate_writes_csv_and_summary(
    tmp_path: Path, settings: Settings, capsys: pytest.CaptureFixture[str]
) -> None:
    path = _simulate(tmp_path, settings, 4, 300, overrides={"h": 0.0})
    summary = _summary(capsys.readouterr().out)
    assert summary["example"] == 4
    assert summary["n"] == 300
    assert summary["overrides"] == {"h": 0.0}
    assert summary["schema_version"] == SCHEMA_VERSION
    assert summary["command"] == "simulate"
    assert load_sample(path).n == 300


def test_density_matches_library_call(
    tmp_path: Path, settings: Settings, capsys: pytest.CaptureFixture[str]
) -> None:
    sample_path = _simulate(tmp_path, settings, 4, 400)
    capsys.readouterr()
    out = tmp_path / "density.csv"
    cfg = RunConfig(
        Command.DENSITY,
        input_path=str(sample_path),
        output_path=str(out),
        R=3.0,
        grid=(GridAxis(-1.0, 1.0, 5),),
    )
    assert run(cfg, settings) == 0
    summary = _summary(capsys.readouterr().out)
    assert summary["R"] == 3.0
    assert summary["radius_source"] == "explicit"
    assert summary["points"] == 5

    table = read_table(out)
    assert table.header == ("point", "estimate", "clipped", "lower", "upper")
    expected = density_at(load_sample(sample_path), -1.0, EstimatorConfig(radius=3.0))
    assert table.column("estimate")[0] == pytest.approx(expected.raw_value, rel=1e-12)


def test_stdout_output_sends_summary_to_stderr(
    tmp_path: Path, settings: Settings, capsys: pytest.CaptureFixture[str]
) -> None:
    sample_path = _simulate(tmp_path, settings, 4, 200)
    capsys.readouterr()
    cfg = RunConfig(Command.LSCV, input_path=str(sample_path), candidates=(3.0, 1.0))
    assert run(cfg, settings) == 0
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0] == "R,score"
    assert len(captured.out.splitlines()) == 3
    summary = _summary(captured.err)
    assert summary["R"] in {1.0, 3.0}


def test_regress_at_point(
    tmp_path: Path, settings: Settings, capsys: pytest.CaptureFixture[str]
) -> None:
    data_path = _simulate(tmp_path, settings, 1, 400)
    capsys.readouterr()
    out = tmp_path / "regress.csv"
    cfg = RunConfig(
        Command.REGRESS, input_path=str(data_path), output_path=str(out), R=3.0, x=(1.0, 2.0)
    )
    assert run(cfg, settings) == 0
    summary = _summary(capsys.readouterr().out)
    assert summary["sigma2"] > 0.0
    table = read_table(out)
    assert table.header == ("x1", "x2", "estimate", "reliable", "lower", "upper")
    assert table.rows.shape == (1, 6)


def test_modes_and_rule_radius(
    tmp_path: Path, settings: Settings, capsys: pytest.CaptureFixture[str]
) -> None:
    sample_path = _simulate(tmp_path, settings, 4, 400, overrides={"h": 0.0})
    capsys.readouterr()
    out = tmp_path / "modes.csv"
    cfg = RunConfig(
        Command.MODES,
        input_path=str(sample_path),
        output_path=str(out),
        rule=Supersmooth(alpha=2.0, c1=0.5),
    )
    assert run(cfg, settings) == 0
    summary = _summary(capsys.readouterr().out)
    assert summary["radius_source"] == "rule"
    assert summary["R"] == pytest.approx(math.sqrt(math.log(400)))
    assert summary["k"] >= 1
    assert read_table(out).header == ("point", "value", "gradient_norm", "hessian_top_eig")


def test_domain_error_exit_code(
    tmp_path: Path, settings: Settings, capsys: pytest.CaptureFixture[str]
) -> None:
    sample_path = _simulate(tmp_path, settings, 4, 100)
    capsys.readouterr()
    cfg = RunConfig(
        Command.DENSITY,
        input_path=str(sample_path),
        R=2.0,
        rule=Supersmooth(alpha=2.0, c1=0.5),
        x=(0.0,),
    )
    assert run(cfg, settings) == 1
    assert "Error: supply exactly one of" in capsys.readouterr().err


def test_missing_input_exit_code(
    tmp_path: Path, settings: Settings, capsys: pytest.CaptureFixture[str]
) -> None:
    cfg = RunConfig(Command.DENSITY, input_path=str(tmp_path / "absent.csv"), R=1.0, x=(0.0,))
    assert run(cfg, settings) == 2
    assert "Error:" in capsys.readouterr().err


def test_simulate_rejects_unknown_example(settings: Settings) -> None:
    assert run(RunConfig(Command.SIMULATE, example=9), settings) == 1
    assert run(RunConfig(Command.SIMULATE), settings) == 1


def test_summary_is_identical_across_runs(
    tmp_path: Path, settings: Settings, capsys: pytest.CaptureFixture[str]
) -> None:
    sample_path = _simulate(tmp_path, settings, 4, 300)
    capsys.readouterr()
    payloads = []
    for name in ("first.csv", "second.csv"):
        cfg = RunConfig(
            Command.DENSITY,
            input_path=str(sample_path),
            output_path=str(tmp_path / name),
            R=3.0,
            grid=(GridAxis(-2.0, 2.0, 9),),
        )
        assert run(cfg, settings) == 0
        payloads.append(capsys.readouterr().out)
    assert payloads[0] == payloads[1]
    assert "seconds" not in _summary(payloads[0])
    assert (tmp_path / "first.csv").read_bytes() == (tmp_path / "second.csv").read_bytes()


def test_regress_with_degenerate_smoother_keeps_the_curve(
    tmp_path: Path,
    settings: Settings,
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    data_path = _simulate(tmp_path, settings, 1, 200)
    capsys.readouterr()
    monkeypatch.setenv("SINCSMOOTH_DENOMINATOR_FLOOR_SCALE", "1e6")
    out = tmp_path / "regress.csv"
    cfg = RunConfig(
        Command.REGRESS,
        input_path=str(data_path),
        output_path=str(out),
        R=3.0,
        grid=(GridAxis(-1.0, 1.0, 3), GridAxis(-1.0, 1.0, 3)),
    )
    assert run(cfg, Settings()) == 0
    summary = _summary(capsys.readouterr().out)
    assert summary["sigma2"] is None
    assert summary["sigma2_degenerate"] is True
    assert summary["unreliable"] == 9

    header, *lines = out.read_text(encoding="utf-8").splitlines()
    assert header == "x1,x2,estimate,reliable,lower,upper"
    assert len(lines) == 9
    for line in lines:
        cells = line.split(",")
        assert math.isfinite(float(cells[2]))
        assert cells[3:] == ["0", "nan", "nan"]
