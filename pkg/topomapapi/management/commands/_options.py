"""Options and error mapping shared by the topomap commands"""
import json
from pathlib import Path

from django.core.management.base import CommandError

from topomapapi.exceptions import ConfigurationError, TopoMapError
from topomapapi.fht.codec import deserialize
from topomapapi.harness.config import load_config
from topomapapi.harness.metrics import json_safe

CONFIG_ERROR = 2
RUN_ERROR = 1


def add_config_arguments(parser):
    parser.add_argument("--config", help="flat TOML file overriding settings.TOPOMAP")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--mode", help="fht, main_only or feature_only")


def config_from_options(options, **overrides):
    """ExperimentConfig from --config, --seed, --mode and overrides"""
    try:
        return load_config(options.get("config"), seed=options.get("seed"),
                           mode=options.get("mode"), **overrides)
    except ConfigurationError as ex:
        raise CommandError(str(ex), returncode=CONFIG_ERROR) from ex


def read_map(path):
    try:
        return deserialize(Path(path).read_bytes())
    except OSError as ex:
        raise CommandError(f"cannot read map {path}: {ex}", returncode=RUN_ERROR) from ex
    except TopoMapError as ex:
        raise CommandError(f"{path}: {ex}", returncode=RUN_ERROR) from ex


def dump(data) -> str:
    return json.dumps(json_safe(data), indent=2, sort_keys=True)


def fail_on_trials(failed: int, what: str):
    if failed:
        raise CommandError(f"{failed} {what} failed", returncode=RUN_ERROR)
