"""Command-line orchestration of the pipeline and experiments.

Every command reads one JSON config, writes its artifacts under an output
directory keyed by the config hash, and is a no-op when already complete
unless --force is given. Exit codes: 0 success, 2 config error, 3 runtime
error.
"""

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from .config import RunConfig, load_config
from .errors import ConfigError, FgbError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

COMMANDS = (
    "prep",
    "train-gan",
    "train-style-toy",
    "export-style-config",
    "gen",
    "fid",
    "train-clf",
    "sweep",
    "gradcam",
    "serve-study",
    "report",
)


def _out_dir(cfg: RunConfig, command: str) -> Path:
    root = os.environ.get("FGB_OUT") or cfg.get("out_root") or "runs"
    out = Path(root) / cfg.config_hash / command
    out.mkdir(parents=True, exist_ok=True)
    return out


def _already_done(out: Path, force: bool) -> bool:
    return (out / "done.marker").exists() and not force


def _finish(out: Path, cfg: RunConfig) -> None:
    cfg.dump(out / "config.json")
    (out / "done.marker").write_text("done\n")


def _load_images_dir(path: Path, max_images: int | None = None) -> list:
    from PIL import Image

    paths = sorted(p for p in Path(path).rglob("*") if p.suffix.lower() in (".png", ".jpg", ".jpeg"))
    if max_images:
        paths = paths[:max_images]
    out = []
    for p in paths:
        with Image.open(p) as im:
            out.append(np.asarray(im.convert("RGB")))
    return out


# -- command implementations --------------------------------------------------


def cmd_prep(cfg: RunConfig, out: Path) -> None:
    from .data import (
        DatasetManifest, SourceDataset, build_splits, ingest_dataset, read_grade_table,
    )
    from .toydata import write_toy_dataset

    section = cfg.section("pipeline")
    seed = section.get("seed", 0)
    test_per_class = section.get("test_per_class", 105)
    manifests = []
    if "toy" in section:
        toy = section["toy"]
        manifests.append(write_toy_dataset(
            out / "toy_images", n=toy.get("n", 500), size=toy.get("size", 32), seed=seed,
        ))
    for entry in section.get("datasets", []):
        grades = read_grade_table(entry["grade_table"]) if entry.get("grade_table") else None
        manifests.append(ingest_dataset(entry["root"], SourceDataset(entry["dataset"]), grades))
    if not manifests:
        raise ConfigError("pipeline section names no datasets")
    split = build_splits(manifests, seed=seed, test_per_class=test_per_class)
    split.write(out / "manifest.csv")
    print(f"manifest: {len(split.records)} records -> {out / 'manifest.csv'}")


def _manifest(cfg: RunConfig):
    from .data import DatasetManifest

    path = cfg.get("manifest")
    if not path:
        prep_out = _out_dir(cfg, "prep") / "manifest.csv"
        if prep_out.exists():
            path = prep_out
        else:
            raise ConfigError("no manifest configured and prep has not run")
    return DatasetManifest.read(path)


def cmd_train_gan(cfg: RunConfig, out: Path) -> None:
    from .gans import GanSpec, TrainConfig, train_gan

    section = cfg.section("gan")
    spec = GanSpec(
        variant=section["variant"],
        latent_dim=section.get("latent_dim", 100),
        image_size=section.get("image_size", 100),
    )
    train_cfg = TrainConfig(**section.get("train", {}))
    ckpt, history = train_gan(
        spec, _manifest(cfg), train_cfg, base_channels=section.get("base_channels", 32)
    )
    ckpt.save(out / "checkpoint.pt")
    history.write_csv(out / "history.csv")
    print(f"{spec.variant.value}: {len(history)} steps -> {out}")


def cmd_train_style_toy(cfg: RunConfig, out: Path) -> None:
    from .style import StyleConfig, train_style_toy

    section = cfg.section("style")
    style_cfg = StyleConfig.from_dict(section.get("config", {}))
    ckpt, history = train_style_toy(
        style_cfg, _manifest(cfg), epochs=section.get("epochs", 5),
        seed=section.get("seed", 0),
    )
    ckpt.save(out / "style_checkpoint.pt")
    with open(out / "history.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["step", "loss_d", "loss_g", "p_aug", "r_estimate"])
        for row in zip(history.steps, history.loss_d, history.loss_g,
                       history.p_aug, history.r_estimate):
            w.writerow(row)
    print(f"style toy: {len(history.steps)} steps -> {out}")


def cmd_export_style_config(cfg: RunConfig, out: Path) -> None:
    from .style import StyleConfig, export_external_config, external_preset

    section = cfg.section("style", required=False)
    style_cfg = (
        StyleConfig.from_dict(section["config"]) if section.get("config") else external_preset()
    )
    descriptor = export_external_config(style_cfg, _manifest(cfg), out)
    print(f"descriptor -> {out / 'run_descriptor.json'} "
          f"(batch {descriptor['batch_size']}, target {descriptor['ada_target']})")


def cmd_gen(cfg: RunConfig, out: Path) -> None:
    from PIL import Image

    from .data import Label
    from .gans import GanCheckpoint, generate

    section = cfg.section("gan")
    ckpt_path = cfg.get("checkpoint") or (_out_dir(cfg, "train-gan") / "checkpoint.pt")
    ckpt = GanCheckpoint.load(ckpt_path)
    n = section.get("generate_n", 16)
    label = section.get("generate_label")
    images = generate(
        ckpt, n,
        label=Label(label) if label else None,
        seed=section.get("generate_seed", 0),
    )
    meta = []
    for i, img in enumerate(images):
        arr = np.clip((img + 1.0) * 127.5, 0, 255).astype(np.uint8)
        name = f"gen_{i:04d}.png"
        Image.fromarray(arr).save(out / name)
        meta.append({"file": name, "label": label})
    (out / "generated.json").write_text(json.dumps(meta, indent=2))
    print(f"wrote {n} images -> {out}")


def _extractor(cfg: RunConfig):
    from .fid import PatchFeatureExtractor, load_extractor

    name = cfg.section("fid").get("extractor", "patch")
    if name == "patch":
        return PatchFeatureExtractor()
    return load_extractor(name)


def cmd_fid(cfg: RunConfig, out: Path) -> None:
    from .fid import fid

    section = cfg.section("fid")
    max_images = section.get("max_images")
    images_a = _load_images_dir(Path(section["set_a"]), max_images)
    images_b = _load_images_dir(Path(section["set_b"]), max_images)
    result = fid(images_a, images_b, _extractor(cfg))
    (out / "fid.json").write_text(json.dumps(result.to_dict(), indent=2) + "\n")
    print(f"FID = {result.value:.4f} -> {out / 'fid.json'}")


def _synth_source(mixing: dict):
    from .classify import GanSynthSource, PoolSynthSource
    from .data import Label
    from .gans import GanCheckpoint

    if mixing.get("synth_checkpoint"):
        return GanSynthSource(GanCheckpoint.load(mixing["synth_checkpoint"]))
    if mixing.get("synth_dir"):
        root = Path(mixing["synth_dir"])
        pools = {}
        for label in Label:
            pools[label] = _load_images_dir(root / label.value) or None
        return PoolSynthSource({k: v for k, v in pools.items() if v})
    return None


def cmd_train_clf(cfg: RunConfig, out: Path) -> None:
    import torch

    from .classify import ClassifierSpec, MixingConfig, evaluate, train_classifier

    section = cfg.section("classifier")
    spec = ClassifierSpec(**section.get("spec", {}))
    mixing = section.get("mixing", {})
    mix = MixingConfig(
        p=mixing.get("p", 0.0),
        synth_source=_synth_source(mixing),
        seed=mixing.get("seed", 0),
    )
    model, losses = train_classifier(spec, _manifest(cfg), mix)
    metrics = evaluate(model, _manifest(cfg), input_size=spec.input_size)
    torch.save(model.state_dict(), out / "model.pt")
    (out / "model.pt.json").write_text(json.dumps(
        {"spec": spec.to_dict(), "p": mix.p, "seed": mix.seed}, indent=2) + "\n")
    (out / "metrics.json").write_text(json.dumps(metrics.to_dict(), indent=2) + "\n")
    print(f"{spec.arch.value}: acc={metrics.acc:.3f} -> {out}")


def cmd_sweep(cfg: RunConfig, out: Path) -> None:
    from .classify import ClassifierSpec, best_p_per_arch, sweep_p, write_sweep_csv

    section = cfg.section("classifier")
    spec = ClassifierSpec(**section.get("spec", {}))
    source = _synth_source(section.get("mixing", {}))
    if source is None:
        raise ConfigError("sweep needs classifier.mixing.synth_checkpoint or synth_dir")
    p_grid = tuple(section.get("p_grid", [round(0.1 * i, 1) for i in range(11)]))
    seeds = tuple(section.get("seeds", [0]))
    cells = sweep_p(spec, _manifest(cfg), source, p_grid=p_grid, seeds=seeds)
    write_sweep_csv(cells, out / "sweep.csv")
    best = best_p_per_arch(cells)
    (out / "best.json").write_text(json.dumps(best, indent=2) + "\n")
    print(f"{len(cells)} cells -> {out / 'sweep.csv'}; best: {best}")


def cmd_gradcam(cfg: RunConfig, out: Path) -> None:
    import torch
    from PIL import Image

    from .classify import ClassifierSpec, build_classifier
    from .explain import gradcam, overlay

    section = cfg.section("gradcam")
    clf_section = cfg.section("classifier", required=False)
    spec = ClassifierSpec(**clf_section.get("spec", {})) if clf_section else ClassifierSpec()
    spec.pretrained = False
    model = build_classifier(spec)
    state = torch.load(section["model"], map_location="cpu", weights_only=True)
    model.load_state_dict(state)

    with Image.open(section["image"]) as im:
        rgb = np.asarray(im.convert("RGB").resize((spec.input_size,) * 2, Image.BILINEAR))
    x = torch.from_numpy(rgb.astype(np.float32) / 127.5 - 1.0).permute(2, 0, 1)
    hm = gradcam(model, x, int(section.get("target_class", 1)), section["layer"])
    np.save(out / "heatmap.npy", hm.values)
    blended = overlay(rgb, hm, alpha=float(section.get("alpha", 0.4)))
    Image.fromarray(blended).save(out / "overlay.png")
    provenance = {
        "model": section["model"], "image": section["image"],
        "target_class": int(section.get("target_class", 1)), "layer": section["layer"],
    }
    (out / "provenance.json").write_text(json.dumps(provenance, indent=2) + "\n")
    print(f"heatmap -> {out / 'overlay.png'}")


def _study_service(cfg: RunConfig):
    from .data import DatasetManifest, Label, Split
    from .study import SessionStore, StudyService

    section = cfg.section("study")
    manifest = DatasetManifest.read(section["real_manifest"])
    records = manifest.subset(split=Split.TEST) or manifest.records
    real_pools = {
        "AMD": [r.path for r in records if r.label is Label.AMD],
        "NON_AMD": [r.path for r in records if r.label is Label.NON_AMD],
    }
    synth_pools = {}
    synth_dir = section.get("synth_dir")
    if synth_dir:
        for label in ("AMD", "NON_AMD"):
            d = Path(synth_dir) / label
            synth_pools[label] = sorted(str(p) for p in d.glob("*.png")) if d.is_dir() else []
    store = SessionStore(section.get("store_dir", "study_sessions"))
    return StudyService(store, real_pools, synth_pools), section


def cmd_serve_study(cfg: RunConfig, out: Path) -> None:
    import uvicorn

    from .study import create_app

    service, section = _study_service(cfg)
    app = create_app(service, frontend_dir=section.get("frontend_dir"))
    host = section.get("host", "127.0.0.1")
    port = int(section.get("port", 8000))
    print(f"serving reader studies on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


def cmd_report(cfg: RunConfig, out: Path) -> None:
    """Collect stored artifacts into benchmark-style CSV tables, with the
    published reference numbers alongside for comparison."""
    from . import reference

    run_root = out.parent  # <out_root>/<config_hash>

    ranking = reference.fid_ranking()
    if [name for name, _ in ranking][0] != "EBGAN" or ranking[-1][0] != "STYLEGAN2_ADA":
        raise RuntimeError("published FID fixture lost its ordering")
    with open(out / "fid_reference.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["architecture", "conditional", "published_fid"])
        for name, value in ranking:
            w.writerow([name, name in reference.PUBLISHED_FID_CONDITIONAL, value])

    fid_rows = []
    for fid_json in sorted(run_root.glob("*/fid.json")):
        data = json.loads(fid_json.read_text())
        fid_rows.append([fid_json.parent.name, data["value"]])
    if fid_rows:
        with open(out / "fid_table.csv", "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["run", "fid"])
            w.writerows(sorted(fid_rows, key=lambda r: -r[1]))

    metrics_rows = []
    for metrics_json in sorted(run_root.glob("*/metrics.json")):
        data = json.loads(metrics_json.read_text())
        metrics_rows.append([
            metrics_json.parent.name, data["acc"], data["sensitivity"], data["specificity"],
        ])
    if metrics_rows:
        with open(out / "classifier_table.csv", "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["run", "acc", "sensitivity", "specificity"])
            w.writerows(metrics_rows)

    study_cfg = cfg.section("study", required=False)
    store_dir = Path(study_cfg.get("store_dir", "study_sessions")) if study_cfg else None
    if store_dir and store_dir.is_dir():
        from .study import SessionStore, StudyService

        store = SessionStore(store_dir)
        service = StudyService(store)
        rows = []
        for sid in store.list_ids():
            try:
                rep = service.score_session(sid)
            except FgbError:
                continue
            rows.append([sid, rep.kind.value, rep.reader_id,
                         rep.acc, rep.sensitivity, rep.specificity])
        if rows:
            with open(out / "study_table.csv", "w", newline="") as f:
                w = csv.writer(f, lineterminator="\n")
                w.writerow(["session", "kind", "reader", "acc", "sensitivity", "specificity"])
                w.writerows(rows)

    print(f"report tables -> {out}")


_HANDLERS = {
    "prep": cmd_prep,
    "train-gan": cmd_train_gan,
    "train-style-toy": cmd_train_style_toy,
    "export-style-config": cmd_export_style_config,
    "gen": cmd_gen,
    "fid": cmd_fid,
    "train-clf": cmd_train_clf,
    "sweep": cmd_sweep,
    "gradcam": cmd_gradcam,
    "serve-study": cmd_serve_study,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="fgb", description=__doc__)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("config", help="path to the JSON run config")
    parser.add_argument("--force", action="store_true",
                        help="rerun even if this command already completed")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = _out_dir(cfg, args.command)
    if args.command != "serve-study" and _already_done(out, args.force):
        print(f"{args.command}: already complete at {out} (use --force to rerun)")
        return EXIT_OK

    try:
        _HANDLERS[args.command](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FgbError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    if args.command != "serve-study":
        _finish(out, cfg)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
