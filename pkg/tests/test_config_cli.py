import os

import numpy as np
import pytest

from pcuq import ConfigError, RunConfig, cli, load_config
from pcuq.config import WORKERS_ENV, build_model
from pcuq.fieldcircuit import RectifierModel
from pcuq.models import MixedModel

CFG_TEXT = """
[model]
kind = synthetic:quadratic
[space]
means = 1.0, 2.0, 3.0
halfwidth = 0.1
[chaos]
degree = 2
[rule]
kind = tensor:3
[time]
t_end = 1.0
dt = 0.25
[sparsify]
tolerances = 1e-1, 1e-2   # inline comment
[pod]
r = 1:3
[run]
workers = 2
"""


def _write_cfg(tmp_path, text=CFG_TEXT, outdir=None, name="run.ini"):
    path = tmp_path / name
    body = text
    if outdir is not None:
        body += f"outdir = {outdir}\n"
    path.write_text(body)
    return str(path)


def test_defaults_validate():
    cfg = load_config()
    assert cfg.model == "field-circuit"
    assert cfg.rule == "stroud5"
    assert cfg.q == 11
    assert cfg.degree == 3
    assert cfg.m == 364
    assert cfg.workers == 1


def test_file_values_and_inline_comments(tmp_path):
    cfg = load_config(_write_cfg(tmp_path))
    assert cfg.model == "synthetic:quadratic"
    assert np.allclose(cfg.means, [1.0, 2.0, 3.0])
    assert cfg.halfwidth == 0.1
    assert cfg.rule == "tensor:3"
    assert cfg.tolerances == (0.1, 0.01)
    assert cfg.r_list == (1, 2, 3)
    assert cfg.workers == 2
    assert cfg.n_times == 5


def test_missing_file_rejected():
    with pytest.raises(ConfigError, match="not found"):
        load_config("/nonexistent/run.ini")


def test_worker_precedence(tmp_path, monkeypatch):
    path = _write_cfg(tmp_path)
    monkeypatch.setenv(WORKERS_ENV, "5")
    assert load_config(path).workers == 5
    assert load_config(path, {"workers": 7}).workers == 7
    monkeypatch.setenv(WORKERS_ENV, "many")
    with pytest.raises(ConfigError, match=WORKERS_ENV):
        load_config(path)


def test_invariants_rejected():
    base = dict(means=np.array([1.0, 2.0]), model="synthetic:affine",
                t_end=1.0, dt=0.5, r_list=(1, 2, 3))
    RunConfig(**base).validate()
    cases = [
        dict(means=np.array([1.0, 0.0])),
        dict(halfwidth=0.0),
        dict(halfwidth=1.0),
        dict(degree=-1),
        dict(dt=0.0),
        dict(t_end=0.0),
        dict(tolerances=(0.1, 1.0)),
        dict(tolerances=(0.0,)),
        dict(r_list=(0, 1)),
        dict(r_list=(50,)),
        dict(workers=0),
        dict(model="synthetic:bogus"),
        dict(rule="simpson"),
    ]
    for override in cases:
        cfg = RunConfig(**{**base, **override})
        with pytest.raises(ConfigError):
            cfg.validate()
            build_model(cfg)


def test_field_circuit_needs_eleven_parameters():
    cfg = RunConfig(means=np.array([1.0, 2.0]), model="field-circuit")
    with pytest.raises(ConfigError, match="11"):
        cfg.validate()


def test_solve_key_ignores_postprocessing():
    a = load_config()
    b = load_config()
    b.degree = 5
    b.tolerances = (0.5,)
    b.r_list = (1, 2)
    assert a.solve_key() == b.solve_key()
    assert a.config_hash() != b.config_hash()
    c = load_config()
    c.dt = 5e-4
    assert a.solve_key() != c.solve_key()


def test_build_model_kinds():
    cfg = RunConfig(means=np.array([1.0, 2.0]), model="synthetic:quadratic",
                    t_end=1.0, dt=0.5, r_list=(1, 2, 3)).validate()
    assert isinstance(build_model(cfg), MixedModel)
    fc = load_config()
    fc.profile = "coarse"
    assert isinstance(build_model(fc), RectifierModel)


def test_model_overrides_reach_benchmark(tmp_path):
    text = CFG_TEXT.replace("kind = synthetic:quadratic",
                            "kind = field-circuit\nprofile = coarse\nr_load = 55.0")
    text = text.replace("means = 1.0, 2.0, 3.0", "")
    path = tmp_path / "run.ini"
    path.write_text(text)
    cfg = load_config(str(path))
    model = build_model(cfg)
    assert model.config.r_load == 55.0
    assert cfg.model_overrides["r_load"] == 55.0


def test_cli_usage_errors_exit_1(capsys):
    assert cli.main(["bogus-command"]) == 1
    assert cli.main([]) == 1
    assert cli.main(["solve", "--config", "/nonexistent.ini"]) == 1
    capsys.readouterr()


def test_cli_project_without_cache_exits_3(tmp_path, capsys):
    cfgfile = _write_cfg(tmp_path, outdir=str(tmp_path / "out"))
    assert cli.main(["project", "-c", cfgfile]) == 3
    assert "run solve first" in capsys.readouterr().err


def test_cli_pipeline_and_cache(tmp_path, capsys, monkeypatch):
    calls = []
    real_build = cli.build_model

    def counting_build(cfg):
        model = real_build(cfg)
        orig = model.solve

        def counted(p):
            calls.append(1)
            return orig(p)

        model.solve = counted
        return model

    monkeypatch.setattr(cli, "build_model", counting_build)
    out = tmp_path / "out"
    cfgfile = _write_cfg(tmp_path, outdir=str(out))

    assert cli.main(["pipeline", "-c", cfgfile, "--workers", "1"]) == 0
    assert len(calls) == 27
    for name in ("nodes_cache.npz", "rule.csv", "coefficients.csv",
                 "sparsity_sweep.csv", "pod_error.csv", "coefficients.png",
                 "sparsity.png", "pod_error.png"):
        assert (out / name).exists(), name

    # a second solve must reuse the cache: no further model evaluations
    assert cli.main(["solve", "-c", cfgfile]) == 0
    assert len(calls) == 27
    assert "cache hit" in capsys.readouterr().out


def test_cli_stale_cache_exits_3(tmp_path, capsys):
    out = tmp_path / "out"
    cfgfile = _write_cfg(tmp_path, outdir=str(out))
    assert cli.main(["solve", "-c", cfgfile]) == 0
    stale = _write_cfg(tmp_path, CFG_TEXT.replace("halfwidth = 0.1", "halfwidth = 0.15"),
                       outdir=str(out), name="stale.ini")
    assert cli.main(["project", "-c", stale]) == 3
    assert "rerun solve" in capsys.readouterr().err
    # the original configuration still projects fine
    assert cli.main(["project", "-c", cfgfile]) == 0


def test_cli_corrupt_cache_exits_3(tmp_path, capsys):
    out = tmp_path / "out"
    out.mkdir()
    (out / "nodes_cache.npz").write_bytes(b"not an archive")
    cfgfile = _write_cfg(tmp_path, outdir=str(out))
    assert cli.main(["project", "-c", cfgfile]) == 3
    capsys.readouterr()


def test_cli_solver_failure_exits_2(tmp_path, capsys, monkeypatch):
    class Exploding:
        times = np.linspace(0.0, 1.0, 5)

        def solve(self, p):
            raise RuntimeError("boom")

    monkeypatch.setattr(cli, "build_model", lambda cfg: Exploding())
    out = tmp_path / "out"
    cfgfile = _write_cfg(tmp_path, outdir=str(out))
    assert cli.main(["solve", "-c", cfgfile]) == 2
    assert (out / "solve_diagnostics.txt").exists()
    diag = (out / "solve_diagnostics.txt").read_text()
    assert "node index: 0" in diag
    assert "boom" in diag
    capsys.readouterr()


def test_cli_env_workers_used(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "2")
    out = tmp_path / "out"
    cfgfile = _write_cfg(tmp_path, CFG_TEXT.replace("workers = 2", ""), outdir=str(out))
    assert cli.main(["solve", "-c", cfgfile]) == 0
    assert "2 worker(s)" in capsys.readouterr().out
