"""Run configuration: JSON file, strict key validation, content hash."""

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

# Allowed keys per section; nested dicts validate recursively. A trailing
# "*" entry means free-form keys are allowed below that point.
_SCHEMA = {
    "out_root": None,
    "pipeline": {
        "datasets": [{"root": None, "dataset": None, "grade_table": None}],
        "toy": {"n": None, "size": None},
        "seed": None,
        "test_per_class": None,
    },
    "gan": {
        "variant": None,
        "latent_dim": None,
        "image_size": None,
        "base_channels": None,
        "train": {"*": None},
        "generate_n": None,
        "generate_label": None,
        "generate_seed": None,
    },
    "style": {
        "config": {"*": None},
        "epochs": None,
        "seed": None,
    },
    "fid": {
        "extractor": None,
        "set_a": None,
        "set_b": None,
        "max_images": None,
    },
    "classifier": {
        "spec": {"*": None},
        "mixing": {"p": None, "seed": None, "synth_checkpoint": None, "synth_dir": None},
        "p_grid": None,
        "seeds": None,
    },
    "gradcam": {
        "model": None,
        "image": None,
        "target_class": None,
        "layer": None,
        "alpha": None,
    },
    "study": {
        "real_manifest": None,
        "synth_dir": None,
        "store_dir": None,
        "host": None,
        "port": None,
        "frontend_dir": None,
    },
    "manifest": None,
    "checkpoint": None,
}


def _validate(node, schema, path="config"):
    if schema is None:
        return
    if isinstance(schema, dict):
        if not isinstance(node, dict):
            raise ConfigError(f"{path}: expected an object")
        if "*" in schema:
            return
        for key, value in node.items():
            if key not in schema:
                raise ConfigError(f"{path}: unknown key {key!r}")
            _validate(value, schema[key], f"{path}.{key}")
    elif isinstance(schema, list):
        if not isinstance(node, list):
            raise ConfigError(f"{path}: expected a list")
        for i, item in enumerate(node):
            _validate(item, schema[0], f"{path}[{i}]")


@dataclass
class RunConfig:
    raw: dict = field(default_factory=dict)
    source_path: str = ""

    def __post_init__(self):
        _validate(self.raw, _SCHEMA)

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()[:12]

    def section(self, name: str, required: bool = True) -> dict:
        if name not in self.raw:
            if required:
                raise ConfigError(f"config is missing the {name!r} section")
            return {}
        return self.raw[name]

    def get(self, name: str, default=None):
        return self.raw.get(name, default)

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.raw, indent=2, sort_keys=True) + "\n")


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return RunConfig(raw=raw, source_path=str(path))
