"""Adapter emitting a dataset layout + run descriptor for the external
full-scale style trainer. Nothing is executed here; the descriptor captures
every hyperparameter of the published 256x256 run."""

import json
import shutil
from pathlib import Path

from PIL import Image

from ..errors import ConfigError
from ..data.manifest import DatasetManifest, Split
from .config import StyleConfig

EXTERNAL_RESOLUTION = 256


def export_external_config(
    style_cfg: StyleConfig,
    manifest: DatasetManifest,
    out_dir: str | Path,
) -> dict:
    """Write the class-per-directory dataset and the JSON run descriptor.

    Returns the descriptor. Manifest images must already be at the
    256x256 generator resolution.
    """
    out_dir = Path(out_dir)
    records = manifest.subset(split=Split.TRAIN) or manifest.records
    if not records:
        raise ConfigError("manifest has no records to export")

    dataset_dir = out_dir / "dataset"
    labels = []
    for r in records:
        with Image.open(r.path) as im:
            if im.size != (EXTERNAL_RESOLUTION, EXTERNAL_RESOLUTION):
                raise ConfigError(
                    f"{r.id}: image is {im.size}, expected "
                    f"{EXTERNAL_RESOLUTION}x{EXTERNAL_RESOLUTION}"
                )
        class_dir = dataset_dir / r.label.value
        class_dir.mkdir(parents=True, exist_ok=True)
        dest = class_dir / f"{r.id.replace(':', '_')}.png"
        if Path(r.path).suffix.lower() == ".png":
            shutil.copyfile(r.path, dest)
        else:
            with Image.open(r.path) as im:
                im.convert("RGB").save(dest)
        labels.append([f"{r.label.value}/{dest.name}", 1 if r.label.value == "AMD" else 0])
    (dataset_dir / "labels.json").write_text(json.dumps({"labels": labels}, indent=2))

    descriptor = {
        "trainer": "stylegan2-ada",
        "dataset_dir": str(dataset_dir),
        "resolution": EXTERNAL_RESOLUTION,
        "batch_size": style_cfg.batch_size,
        "ada_target": style_cfg.ada_target,
        "lr": style_cfg.lr,
        "adam_betas": list(style_cfg.adam_betas),
        "adam_eps": style_cfg.adam_eps,
        "class_conditional": True,
        "augmentations": ["rotation", "geometric", "color"],
        "style_config": style_cfg.to_dict(),
        "invocation": [
            "train.py",
            f"--data={dataset_dir}",
            "--cond=1",
            f"--batch={style_cfg.batch_size}",
            f"--target={style_cfg.ada_target}",
            f"--glr={style_cfg.lr}",
            f"--dlr={style_cfg.lr}",
        ],
    }
    (out_dir / "run_descriptor.json").write_text(
        json.dumps(descriptor, indent=2, sort_keys=True) + "\n"
    )
    return descriptor


def load_external_config(path: str | Path) -> StyleConfig:
    """Parse a run descriptor back into the StyleConfig that produced it."""
    descriptor = json.loads(Path(path).read_text())
    return StyleConfig.from_dict(descriptor["style_config"])
