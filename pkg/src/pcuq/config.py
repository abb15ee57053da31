"""Run configuration: a flat INI file with sections, overridable from
the command line.

The benchmark has a few dozen knobs; key=value lines in named sections
beat positional flags for that.  Two digests are derived from a parsed
configuration: ``config_hash`` identifies the complete run (stamped
into every output file) and ``solve_key`` identifies only what the
node solutions depend on, so changing e.g. the sparsification
tolerances never invalidates a solution cache.
"""

import configparser
import hashlib
import os
from dataclasses import dataclass, field as dc_field
from math import comb

import numpy as np

from .errors import ConfigError
from .fieldcircuit.benchmark import DEFAULT_MEANS, PROFILES

WORKERS_ENV = "PCUQ_WORKERS"

# model-section keys forwarded to BenchmarkConfig
_MODEL_FLOAT_KEYS = ("amplitude", "period", "r_primary", "r_secondary",
                     "r_load", "c_load", "depth", "mesh_h")
_MODEL_INT_KEYS = ("turns_primary", "turns_secondary")


@dataclass
class RunConfig:
    means: np.ndarray
    halfwidth: float = 0.20
    degree: int = 3
    rule: str = "stroud5"
    t_end: float = 0.04
    dt: float = 1e-4
    model: str = "field-circuit"
    profile: str = "benchmark"
    model_overrides: dict = dc_field(default_factory=dict)
    tolerances: tuple = (1e-1, 1e-2, 1e-3, 1e-4)
    r_list: tuple = tuple(range(1, 21))
    outdir: str = "out"
    workers: int = 1

    @property
    def q(self):
        return len(self.means)

    @property
    def n_times(self):
        return int(round(self.t_end / self.dt)) + 1

    @property
    def m(self):
        return comb(self.degree + self.q, self.q)

    def validate(self):
        if self.q < 1:
            raise ConfigError("need at least one parameter mean")
        if np.any(self.means == 0.0):
            raise ConfigError("zero parameter mean makes the relative box degenerate")
        if not 0.0 < self.halfwidth < 1.0:
            raise ConfigError(f"halfwidth must be in (0, 1), got {self.halfwidth}")
        if self.degree < 0:
            raise ConfigError(f"chaos degree must be >= 0, got {self.degree}")
        if self.t_end <= 0 or self.dt <= 0 or self.n_times < 2:
            raise ConfigError(f"bad time grid: t_end={self.t_end}, dt={self.dt}")
        for eps in self.tolerances:
            if not 0.0 < eps < 1.0:
                raise ConfigError(f"sparsification tolerance {eps} outside (0, 1)")
        rmax = min(self.m, self.n_times)
        for r in self.r_list:
            if not 1 <= r <= rmax:
                raise ConfigError(f"reduction dimension {r} outside [1, {rmax}]")
        rule = self.rule.strip().lower()
        if rule != "stroud5":
            tail = rule.split(":", 1)[1] if rule.startswith("tensor:") else ""
            if not (tail.isdigit() and int(tail) >= 1):
                raise ConfigError(f"unknown cubature rule {self.rule!r}")
        if self.model != "field-circuit" and not self.model.startswith("synthetic:"):
            raise ConfigError(f"unknown model kind {self.model!r}")
        if self.model == "field-circuit":
            if self.q != 11:
                raise ConfigError(f"the field-circuit model takes 11 parameters, got {self.q}")
            if self.profile not in PROFILES:
                raise ConfigError(f"unknown profile {self.profile!r}")
        if self.workers < 1:
            raise ConfigError(f"worker count must be >= 1, got {self.workers}")
        return self

    def times(self):
        return np.linspace(0.0, self.t_end, self.n_times)

    def _digest(self, parts):
        h = hashlib.sha256()
        for part in parts:
            h.update(part.encode())
            h.update(b"\x00")
        return h.hexdigest()[:16]

    def _solve_parts(self):
        parts = ["means=" + ",".join("%.17g" % v for v in self.means),
                 "halfwidth=%.17g" % self.halfwidth,
                 "rule=" + self.rule,
                 "t_end=%.17g" % self.t_end,
                 "dt=%.17g" % self.dt,
                 "model=" + self.model,
                 "profile=" + self.profile]
        for key in sorted(self.model_overrides):
            parts.append(f"{key}={self.model_overrides[key]!r}")
        return parts

    def solve_key(self):
        """Digest of everything the node solutions depend on."""
        return self._digest(self._solve_parts())

    def config_hash(self):
        """Digest of the full result-relevant configuration."""
        parts = self._solve_parts()
        parts += ["degree=%d" % self.degree,
                  "tolerances=" + ",".join("%.17g" % e for e in self.tolerances),
                  "r=" + ",".join(str(r) for r in self.r_list)]
        return self._digest(parts)


def _parse_floats(text):
    return [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def _parse_r_list(text):
    text = text.strip()
    if ":" in text and "," not in text:
        lo, hi = text.split(":")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def load_config(path=None, cli_overrides=None):
    """Build a validated RunConfig.

    Precedence per key: command-line override, then environment (worker
    count only), then the file, then the built-in default.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        try:
            cp.read(path)
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from None

    def get(section, key, default=None):
        try:
            return cp.get(section, key)
        except (configparser.NoSectionError, configparser.NoOptionError):
            return default

    try:
        means_text = get("space", "means")
        means = (np.array(_parse_floats(means_text)) if means_text
                 else DEFAULT_MEANS.copy())
        overrides = {}
        for key in _MODEL_FLOAT_KEYS:
            val = get("model", key)
            if val is not None:
                overrides[key] = float(val)
        for key in _MODEL_INT_KEYS:
            val = get("model", key)
            if val is not None:
                overrides[key] = int(val)
        cfg = RunConfig(
            means=means,
            halfwidth=float(get("space", "halfwidth", "0.20")),
            degree=int(get("chaos", "degree", "3")),
            rule=get("rule", "kind", "stroud5"),
            t_end=float(get("time", "t_end", "0.04")),
            dt=float(get("time", "dt", "1e-4")),
            model=get("model", "kind", "field-circuit"),
            profile=get("model", "profile", "benchmark"),
            model_overrides=overrides,
            tolerances=tuple(_parse_floats(get("sparsify", "tolerances",
                                               "1e-1, 1e-2, 1e-3, 1e-4"))),
            r_list=_parse_r_list(get("pod", "r", "1:20")),
            outdir=get("run", "outdir", "out"),
            workers=int(get("run", "workers", "1")),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid configuration value: {exc}") from None

    env_workers = os.environ.get(WORKERS_ENV)
    if env_workers is not None:
        try:
            cfg.workers = int(env_workers)
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV}={env_workers!r} is not an integer") from None
    for key, value in (cli_overrides or {}).items():
        if value is not None:
            setattr(cfg, key, value)
    return cfg.validate()


def build_model(cfg: RunConfig):
    """Instantiate the configured parametric model."""
    if cfg.model == "field-circuit":
        from .fieldcircuit.benchmark import RectifierModel, benchmark_config
        bc = benchmark_config(cfg.profile, dt=cfg.dt, t_end=cfg.t_end,
                              **cfg.model_overrides)
        return RectifierModel(bc)
    name = cfg.model.split(":", 1)[1]
    from .models import make_synthetic
    from .space import ParameterSpace
    space = ParameterSpace.uniform_box(cfg.means, cfg.halfwidth)
    return make_synthetic(name, space, cfg.times())
