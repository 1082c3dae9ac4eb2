"""Run configuration: one YAML file with full defaulting and strict keys.

Every command resolves its section from the same document; unknown keys are
rejected so typos never silently fall back to defaults. The fully resolved
config (and its hash) is echoed into run manifests for provenance.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .domain import PeriodBoundaries, PirRange
from .errors import ConfigError
from .learn.specs import KINDS, LearnerSpec
from .simgen import CohortConfig

DEFAULT_BASE_KINDS = list(KINDS)
DEFAULT_META_GRID = [{"n_trees": 80, "learning_rate": 0.1, "max_depth": 3}]


def _take(section: dict, allowed: set[str], context: str) -> dict:
    if section is None:
        return {}
    if not isinstance(section, dict):
        raise ConfigError(f"{context}: expected a mapping")
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"{context}: unknown keys {sorted(unknown)}")
    return dict(section)


@dataclass
class ModelConfig:
    base_specs: list[LearnerSpec] = field(
        default_factory=lambda: [LearnerSpec(kind=k) for k in DEFAULT_BASE_KINDS]
    )
    meta_grid: list[dict] = field(default_factory=lambda: [dict(g) for g in DEFAULT_META_GRID])
    top_k: int = 10
    inner_k: int = 3


@dataclass
class EvalConfig:
    k: int = 5
    inner_k: int = 3
    seed: int = 0


@dataclass
class RunConfig:
    pir_events: str = "pir_events.csv"
    mood_reports: str = "mood_reports.csv"
    features: str = "features.csv"
    model_file: str = "model_{target}.json"
    predictions: str = "predictions.csv"
    pir_range: PirRange = field(default_factory=PirRange)
    periods: PeriodBoundaries = field(default_factory=PeriodBoundaries)
    targets: list[str] = field(default_factory=lambda: ["valence", "arousal"])
    model: ModelConfig = field(default_factory=ModelConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    simulate: CohortConfig = field(default_factory=CohortConfig)

    def resolved_dict(self) -> dict:
        return {
            "paths": {
                "pir_events": self.pir_events,
                "mood_reports": self.mood_reports,
                "features": self.features,
                "model_file": self.model_file,
                "predictions": self.predictions,
            },
            "pir_range": {"lo": self.pir_range.lo, "hi": self.pir_range.hi},
            "periods": {
                "midnight": self.periods.midnight,
                "morning": self.periods.morning,
                "afternoon": self.periods.afternoon,
                "evening": self.periods.evening,
            },
            "targets": list(self.targets),
            "model": {
                "base_learners": [
                    {"kind": s.kind, "hyperparams": dict(s.hyperparams), "seed": s.seed}
                    for s in self.model.base_specs
                ],
                "meta_grid": [dict(g) for g in self.model.meta_grid],
                "top_k": self.model.top_k,
                "inner_k": self.model.inner_k,
            },
            "eval": {"k": self.eval.k, "inner_k": self.eval.inner_k, "seed": self.eval.seed},
            "simulate": {k: getattr(self.simulate, k) for k in CohortConfig.__dataclass_fields__},
        }

    def config_hash(self) -> str:
        canon = json.dumps(self.resolved_dict(), sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _parse_base_learners(raw, context: str) -> list[LearnerSpec]:
    specs = []
    for i, item in enumerate(raw):
        if isinstance(item, str):
            specs.append(LearnerSpec(kind=item))
        else:
            d = _take(item, {"kind", "hyperparams", "seed"}, f"{context}[{i}]")
            if "kind" not in d:
                raise ConfigError(f"{context}[{i}]: missing 'kind'")
            specs.append(
                LearnerSpec(kind=d["kind"], hyperparams=d.get("hyperparams", {}), seed=d.get("seed", 0))
            )
    return specs


def load_config(path: Optional[str] = None, seed_override: Optional[int] = None) -> RunConfig:
    """Load and fully resolve a YAML config; path None means all defaults."""
    doc = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            doc = yaml.safe_load(p.read_text(encoding="utf-8")) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"bad YAML in {path}: {exc}") from exc

    top = _take(doc, {"paths", "pir_range", "periods", "targets", "model", "eval", "simulate"}, "config")
    cfg = RunConfig()

    paths = _take(
        top.get("paths"),
        {"pir_events", "mood_reports", "features", "model_file", "predictions"},
        "paths",
    )
    for key, value in paths.items():
        setattr(cfg, key, str(value))

    try:
        rng = _take(top.get("pir_range"), {"lo", "hi"}, "pir_range")
        if rng:
            cfg.pir_range = PirRange(lo=float(rng.get("lo", 0.2)), hi=float(rng.get("hi", 0.7)))
        per = _take(top.get("periods"), {"midnight", "morning", "afternoon", "evening"}, "periods")
        if per:
            defaults = PeriodBoundaries()
            cfg.periods = PeriodBoundaries(
                **{k: int(per.get(k, getattr(defaults, k))) for k in ("midnight", "morning", "afternoon", "evening")}
            )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if "targets" in top:
        targets = list(top["targets"])
        bad = [t for t in targets if t not in ("valence", "arousal")]
        if bad:
            raise ConfigError(f"targets: unknown {bad}")
        cfg.targets = targets

    model = _take(top.get("model"), {"base_learners", "meta_grid", "top_k", "inner_k"}, "model")
    if "base_learners" in model:
        cfg.model.base_specs = _parse_base_learners(model["base_learners"], "model.base_learners")
    else:
        cfg.model.base_specs = [LearnerSpec(kind=k) for k in DEFAULT_BASE_KINDS]
    if "meta_grid" in model:
        cfg.model.meta_grid = [dict(g) for g in model["meta_grid"]]
    cfg.model.top_k = int(model.get("top_k", cfg.model.top_k))
    cfg.model.inner_k = int(model.get("inner_k", cfg.model.inner_k))

    ev = _take(top.get("eval"), {"k", "inner_k", "seed"}, "eval")
    cfg.eval = EvalConfig(
        k=int(ev.get("k", 5)), inner_k=int(ev.get("inner_k", 3)), seed=int(ev.get("seed", 0))
    )

    sim = _take(top.get("simulate"), set(CohortConfig.__dataclass_fields__), "simulate")
    try:
        cfg.simulate = CohortConfig(**sim)
    except TypeError as exc:
        raise ConfigError(f"simulate: {exc}") from exc

    if seed_override is not None:
        cfg.eval = EvalConfig(k=cfg.eval.k, inner_k=cfg.eval.inner_k, seed=seed_override)
        cfg.simulate = CohortConfig(
            **{**{k: getattr(cfg.simulate, k) for k in CohortConfig.__dataclass_fields__}, "seed": seed_override}
        )
    if not cfg.model.base_specs:
        cfg.model.base_specs = [LearnerSpec(kind=k) for k in DEFAULT_BASE_KINDS]
    return cfg
