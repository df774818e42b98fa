"""Classifier configuration, mixing parameters, and evaluation metrics."""

from dataclasses import dataclass, field, asdict
from enum import Enum

import numpy as np


class Arch(str, Enum):
    SQUEEZENET = "SQUEEZENET"
    ALEXNET = "ALEXNET"
    RESNET18 = "RESNET18"


@dataclass
class ClassifierSpec:
    arch: Arch = Arch.RESNET18
    pretrained: bool = True
    lr: float = 0.0001
    momentum_decay: float = 0.9
    batch_size: int = 32
    epochs: int = 5
    input_size: int = 224

    def __post_init__(self):
        self.arch = Arch(self.arch)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["arch"] = self.arch.value
        return d


@dataclass
class MixingConfig:
    """Per-image probability p of swapping a real image for a synthetic one."""

    p: float = 0.0
    synth_source: object | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")


@dataclass(frozen=True)
class ClassifierMetrics:
    """Confusion matrix (rows true {AMD, NON_AMD}, cols predicted) and
    the derived scores, diseased class positive."""

    confusion: tuple[tuple[int, int], tuple[int, int]]
    acc: float
    sensitivity: float
    specificity: float
    precision: dict[str, float]
    recall: dict[str, float]
    f1: dict[str, float]

    @classmethod
    def from_confusion(cls, confusion) -> "ClassifierMetrics":
        (tp, fn), (fp, tn) = confusion
        total = tp + fn + fp + tn
        if total == 0:
            raise ValueError("empty confusion matrix")

        def ratio(num, den):
            return num / den if den else 0.0

        prec_amd = ratio(tp, tp + fp)
        rec_amd = ratio(tp, tp + fn)
        prec_non = ratio(tn, tn + fn)
        rec_non = ratio(tn, tn + fp)

        def f1(p, r):
            return ratio(2 * p * r, p + r)

        return cls(
            confusion=((int(tp), int(fn)), (int(fp), int(tn))),
            acc=ratio(tp + tn, total),
            sensitivity=rec_amd,
            specificity=rec_non,
            precision={"AMD": prec_amd, "NON_AMD": prec_non},
            recall={"AMD": rec_amd, "NON_AMD": rec_non},
            f1={"AMD": f1(prec_amd, rec_amd), "NON_AMD": f1(prec_non, rec_non)},
        )

    @classmethod
    def from_predictions(cls, y_true, y_pred) -> "ClassifierMetrics":
        """Label convention: 1 = AMD (positive), 0 = NON_AMD."""
        y_true = np.asarray(y_true)
        y_pred = np.asarray(y_pred)
        tp = int(((y_true == 1) & (y_pred == 1)).sum())
        fn = int(((y_true == 1) & (y_pred == 0)).sum())
        fp = int(((y_true == 0) & (y_pred == 1)).sum())
        tn = int(((y_true == 0) & (y_pred == 0)).sum())
        return cls.from_confusion(((tp, fn), (fp, tn)))

    def to_dict(self) -> dict:
        return {
            "confusion": [list(r) for r in self.confusion],
            "acc": self.acc,
            "sensitivity": self.sensitivity,
            "specificity": self.specificity,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }
