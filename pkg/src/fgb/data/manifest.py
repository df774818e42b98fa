"""Manifest records: provenance, label, quality grade and split per image."""

import csv
import json
from collections import Counter
from dataclasses import dataclass, replace, field
from enum import Enum
from pathlib import Path


class SourceDataset(str, Enum):
    ICHALLENGE_AMD = "ICHALLENGE_AMD"
    ODIR_2019 = "ODIR_2019"
    RIADD = "RIADD"


class Label(str, Enum):
    AMD = "AMD"
    NON_AMD = "NON_AMD"


class Grade(str, Enum):
    GOOD = "GOOD"
    USABLE = "USABLE"
    REJECT = "REJECT"


class Split(str, Enum):
    TRAIN = "TRAIN"
    TEST = "TEST"
    UNASSIGNED = "UNASSIGNED"


@dataclass(frozen=True)
class RetinaCircle:
    cx: float
    cy: float
    r: float

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("circle radius must be positive")


@dataclass(frozen=True)
class ImageRecord:
    id: str
    source_dataset: SourceDataset
    path: str
    label: Label
    grade: Grade
    split: Split = Split.UNASSIGNED
    circle: RetinaCircle | None = None

    def with_split(self, split: Split) -> "ImageRecord":
        return replace(self, split=split)


def _tally(records) -> dict[str, int]:
    counts = Counter((r.label.value, r.split.value) for r in records)
    return {f"{label}/{split}": n for (label, split), n in sorted(counts.items())}


@dataclass
class DatasetManifest:
    records: list[ImageRecord] = field(default_factory=list)
    seed: int = 0

    def __post_init__(self):
        ids = [r.id for r in self.records]
        if len(ids) != len(set(ids)):
            dupes = [i for i, n in Counter(ids).items() if n > 1]
            raise ValueError(f"duplicate record ids: {dupes[:5]}")
        for r in self.records:
            if r.grade is Grade.REJECT and r.split is not Split.UNASSIGNED:
                raise ValueError(f"REJECT record {r.id} carries split {r.split.value}")

    @property
    def counts(self) -> dict[str, int]:
        return _tally(self.records)

    def subset(self, label: Label | None = None, split: Split | None = None) -> list[ImageRecord]:
        out = self.records
        if label is not None:
            out = [r for r in out if r.label is label]
        if split is not None:
            out = [r for r in out if r.split is split]
        return out

    def validate_paths(self) -> list[str]:
        """Return ids whose file is missing on disk."""
        return [r.id for r in self.records if not Path(r.path).exists()]

    # -- CSV + JSON sidecar serialization ------------------------------------

    CSV_HEADER = ["id", "source_dataset", "path", "label", "grade", "split"]

    def write(self, csv_path: str | Path) -> None:
        csv_path = Path(csv_path)
        with open(csv_path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(self.CSV_HEADER)
            for r in self.records:
                w.writerow([
                    r.id, r.source_dataset.value, r.path,
                    r.label.value, r.grade.value, r.split.value,
                ])
        sidecar = {"counts": self.counts, "seed": self.seed, "total": len(self.records)}
        csv_path.with_suffix(".json").write_text(
            json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    @classmethod
    def read(cls, csv_path: str | Path) -> "DatasetManifest":
        csv_path = Path(csv_path)
        records = []
        with open(csv_path, newline="", encoding="utf-8") as f:
            for row in csv.DictReader(f):
                records.append(ImageRecord(
                    id=row["id"],
                    source_dataset=SourceDataset(row["source_dataset"]),
                    path=row["path"],
                    label=Label(row["label"]),
                    grade=Grade(row["grade"]),
                    split=Split(row["split"]),
                ))
        seed = 0
        sidecar = csv_path.with_suffix(".json")
        if sidecar.exists():
            seed = json.loads(sidecar.read_text()).get("seed", 0)
        return cls(records=records, seed=seed)
