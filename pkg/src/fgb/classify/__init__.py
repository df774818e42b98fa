from .spec import Arch, ClassifierSpec, MixingConfig, ClassifierMetrics
from .mixing import (
    PoolSynthSource,
    GanSynthSource,
    mix_batch,
    sampler_weights,
    classic_augment,
)
from .train import build_classifier, train_classifier, evaluate
from .sweep import SweepCell, sweep_p, write_sweep_csv, best_p_per_arch, DEFAULT_P_GRID

__all__ = [
    "Arch",
    "ClassifierSpec",
    "MixingConfig",
    "ClassifierMetrics",
    "PoolSynthSource",
    "GanSynthSource",
    "mix_batch",
    "sampler_weights",
    "classic_augment",
    "build_classifier",
    "train_classifier",
    "evaluate",
    "SweepCell",
    "sweep_p",
    "write_sweep_csv",
    "best_p_per_arch",
    "DEFAULT_P_GRID",
]
