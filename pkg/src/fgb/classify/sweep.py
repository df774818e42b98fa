"""Replacement-probability sweep over classifier architectures."""

import csv
from dataclasses import dataclass, replace
from pathlib import Path

from ..data.manifest import DatasetManifest
from .spec import ClassifierSpec, MixingConfig
from .train import evaluate, train_classifier

DEFAULT_P_GRID = tuple(round(0.1 * i, 1) for i in range(11))


@dataclass(frozen=True)
class SweepCell:
    arch: str
    p: float
    seed: int
    acc: float
    sensitivity: float
    specificity: float


def sweep_p(
    spec: ClassifierSpec,
    manifest: DatasetManifest,
    synth_source,
    p_grid=DEFAULT_P_GRID,
    seeds=(0,),
) -> list[SweepCell]:
    """One train/evaluate cycle per (p, seed); cells are independent jobs."""
    cells = []
    for p in p_grid:
        for seed in seeds:
            mix = MixingConfig(p=p, synth_source=synth_source if p > 0 else None, seed=seed)
            model, _ = train_classifier(spec, manifest, mix)
            metrics = evaluate(model, manifest, input_size=spec.input_size)
            cells.append(SweepCell(
                arch=spec.arch.value, p=p, seed=seed,
                acc=metrics.acc,
                sensitivity=metrics.sensitivity,
                specificity=metrics.specificity,
            ))
    return cells


def write_sweep_csv(cells: list[SweepCell], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["arch", "p", "seed", "acc", "sensitivity", "specificity"])
        for c in cells:
            w.writerow([c.arch, c.p, c.seed, c.acc, c.sensitivity, c.specificity])


def best_p_per_arch(cells: list[SweepCell]) -> dict[str, tuple[float, float]]:
    """arch -> (argmax p, mean accuracy at that p) averaged over seeds."""
    by_arch_p: dict[tuple[str, float], list[float]] = {}
    for c in cells:
        by_arch_p.setdefault((c.arch, c.p), []).append(c.acc)
    best: dict[str, tuple[float, float]] = {}
    for (arch, p), accs in by_arch_p.items():
        mean_acc = sum(accs) / len(accs)
        if arch not in best or mean_acc > best[arch][1]:
            best[arch] = (p, mean_acc)
    return best
