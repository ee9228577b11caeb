"""Experiment configuration.

Values come from settings.TOPOMAP, then a flat TOML file, then explicit
overrides (command line options). The merged mapping is validated by
ExperimentConfigSerializer.
"""
from __future__ import annotations

import tomllib
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

from django.conf import settings
from rest_framework import serializers

from ..exceptions import ConfigurationError
from ..exploration.explorer import ExploreConfig
from ..fht.builder import MODES, BuilderState
from ..relocalization.relocalizer import RelocConfig
from ..world.descriptor import descriptor_source


@dataclass(frozen=True)
class ExperimentConfig:
    world: str = "museum.world"
    seed: int = 7
    mode: str = "fht"
    modes: tuple = MODES
    start: Optional[tuple] = None
    descriptor_dim: int = 32
    n_beams: int = 360
    max_range: float = 7.0
    noise_std: float = 0.0
    sigma_c: float = 2.65
    gamma1: float = 1.0
    gamma2: float = 0.5
    th_s: float = 3.0
    n_bins: int = 10
    rho: float = 1.5
    k: float = 1000.0
    clearance: Optional[float] = None
    max_half_extent: float = 7.0
    th_match: float = 0.85
    n_seeds: int = 36
    rms_accept: float = 0.2
    min_estimations: int = 3
    loss: str = "huber"
    budget: int = 4000
    r_info: float = 7.0
    replan_every: int = 10
    step: float = 0.25
    min_frontier_cells: int = 3
    reloc_trials: int = 8
    plan_pairs: int = 6
    walk_length: float = 60.0
    offset_extent: float = 5.0

    def explore_config(self) -> ExploreConfig:
        return ExploreConfig(
            budget=self.budget, r_info=self.r_info, replan_every=self.replan_every,
            seed=self.seed, step=self.step, n_beams=self.n_beams, max_range=self.max_range,
            noise_std=self.noise_std, clearance=self.clearance,
            min_frontier_cells=self.min_frontier_cells)

    def builder_state(self) -> BuilderState:
        return BuilderState(gamma1=self.gamma1, gamma2=self.gamma2, sigma_c=self.sigma_c,
                            th_s=self.th_s, n_bins=self.n_bins)

    def reloc_config(self, mode: Optional[str] = None) -> RelocConfig:
        return RelocConfig(
            th_match=self.th_match, n_seeds=self.n_seeds, rms_accept=self.rms_accept,
            min_estimations=self.min_estimations, loss=self.loss, n_beams=self.n_beams,
            max_range=self.max_range, feature_only=(mode or self.mode) == "feature_only")

    def descriptor(self):
        return descriptor_source(self.max_range, self.descriptor_dim)

    def as_dict(self) -> dict:
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data["modes"] = list(self.modes)
        data["start"] = None if self.start is None else list(self.start)
        return data


class ExperimentConfigSerializer(serializers.Serializer):
    """Validates a merged configuration mapping"""

    world = serializers.CharField()
    seed = serializers.IntegerField(min_value=0)
    mode = serializers.ChoiceField(choices=MODES)
    modes = serializers.ListField(child=serializers.ChoiceField(choices=MODES), min_length=1)
    start = serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2,
                                  allow_null=True, required=False)
    descriptor_dim = serializers.IntegerField(min_value=2)
    n_beams = serializers.IntegerField(min_value=4)
    max_range = serializers.FloatField(min_value=0.0)
    noise_std = serializers.FloatField(min_value=0.0)
    sigma_c = serializers.FloatField()
    gamma1 = serializers.FloatField()
    gamma2 = serializers.FloatField()
    th_s = serializers.FloatField(min_value=0.0)
    n_bins = serializers.IntegerField(min_value=2)
    rho = serializers.FloatField(min_value=1.0)
    k = serializers.FloatField(min_value=1.0)
    clearance = serializers.FloatField(min_value=0.0, allow_null=True, required=False)
    max_half_extent = serializers.FloatField(min_value=0.0)
    th_match = serializers.FloatField(min_value=-1.0, max_value=1.0)
    n_seeds = serializers.IntegerField(min_value=1)
    rms_accept = serializers.FloatField(min_value=0.0)
    min_estimations = serializers.IntegerField(min_value=1)
    loss = serializers.ChoiceField(choices=("huber", "l2"))
    budget = serializers.IntegerField(min_value=0)
    r_info = serializers.FloatField(min_value=0.0)
    replan_every = serializers.IntegerField(min_value=1)
    step = serializers.FloatField(min_value=0.0)
    min_frontier_cells = serializers.IntegerField(min_value=1)
    reloc_trials = serializers.IntegerField(min_value=0)
    plan_pairs = serializers.IntegerField(min_value=0)
    walk_length = serializers.FloatField(min_value=0.0)
    offset_extent = serializers.FloatField(min_value=0.0)

    def validate_descriptor_dim(self, value):
        if value % 2:
            raise serializers.ValidationError("must be even")
        return value

    def validate_sigma_c(self, value):
        if value <= 0:
            raise serializers.ValidationError("must be positive")
        return value

    def validate_k(self, value):
        if value <= 1:
            raise serializers.ValidationError("must be greater than 1")
        return value

    def validate(self, attrs):
        if not attrs["gamma2"] < attrs["gamma1"]:
            raise serializers.ValidationError({"gamma2": "must be below gamma1"})
        for name in ("max_range", "step"):
            if attrs[name] <= 0:
                raise serializers.ValidationError({name: "must be positive"})
        return attrs


FIELD_NAMES = {f.name for f in fields(ExperimentConfig)}


def settings_defaults() -> dict:
    values = {}
    for key, value in settings.TOPOMAP.items():
        name = key.lower()
        if name in FIELD_NAMES:
            values[name] = value
    return values


def _flatten_errors(errors, prefix=""):
    for key, value in errors.items():
        if isinstance(value, dict):
            yield from _flatten_errors(value, f"{prefix}{key}.")
        else:
            yield f"{prefix}{key}: {' '.join(str(v) for v in value)}"


def build_config(values: dict) -> ExperimentConfig:
    unknown = sorted(set(values) - FIELD_NAMES)
    if unknown:
        raise ConfigurationError(f"unknown configuration keys: {', '.join(unknown)}")
    merged = ExperimentConfig().as_dict()
    merged.update(values)
    serializer = ExperimentConfigSerializer(data=merged)
    if not serializer.is_valid():
        raise ConfigurationError("invalid configuration: " + "; ".join(
            _flatten_errors(serializer.errors)))
    data = dict(serializer.validated_data)
    data["modes"] = tuple(data["modes"])
    if data.get("start") is not None:
        data["start"] = tuple(data["start"])
    return ExperimentConfig(**data)


def load_config(path=None, **overrides) -> ExperimentConfig:
    """settings.TOPOMAP, then the TOML file at path, then non-None overrides"""
    values = settings_defaults()
    if path is not None:
        path = Path(path)
        if not path.exists():
            bundled = Path(settings.TOPOMAP["CONFIGS_DIR"]) / path.name
            if not bundled.exists():
                raise ConfigurationError(f"config file {path} not found")
            path = bundled
        try:
            values.update(tomllib.loads(path.read_text()))
        except tomllib.TOMLDecodeError as ex:
            raise ConfigurationError(f"{path}: {ex}") from ex
    values.update({key: value for key, value in overrides.items() if value is not None})
    return build_config(values)


def with_mode(config: ExperimentConfig, mode: str) -> ExperimentConfig:
    if mode not in MODES:
        raise ConfigurationError(f"unknown mode {mode!r}")
    return replace(config, mode=mode)
