"""Dataset ingestion from on-disk layouts into manifests.

All three sources are consumed in the same normalized layout: a root
directory with an ``AMD/`` and a ``Non-AMD/`` subfolder of PNG/JPEG files
(the arrangement users produce when sorting each dataset by its published
annotations). Alternatively a ``labels.csv`` (columns ``id,label``) next
to a flat image directory is accepted.
"""

import csv
import logging
import warnings
from pathlib import Path

from .manifest import DatasetManifest, Grade, ImageRecord, Label, SourceDataset, Split

log = logging.getLogger(__name__)

IMAGE_EXTS = {".png", ".jpg", ".jpeg"}

_FOLDER_LABELS = {
    "amd": Label.AMD,
    "non-amd": Label.NON_AMD,
    "non_amd": Label.NON_AMD,
    "nonamd": Label.NON_AMD,
}


def read_grade_table(path: str | Path) -> dict[str, Grade]:
    """CSV ``id,grade`` -> mapping; unknown grade value is a hard error."""
    table = {}
    with open(path, newline="", encoding="utf-8") as f:
        for i, row in enumerate(csv.DictReader(f), start=2):
            try:
                table[row["id"]] = Grade(row["grade"].strip().upper())
            except ValueError:
                raise ValueError(
                    f"{path}: line {i}: unknown grade {row['grade']!r} for id {row['id']!r}"
                ) from None
    return table


def _iter_images(folder: Path):
    for p in sorted(folder.rglob("*")):
        if p.is_file() and p.suffix.lower() in IMAGE_EXTS:
            yield p


def _labelled_paths(root: Path) -> list[tuple[str, Path, Label]]:
    subdirs = {d.name.lower(): d for d in root.iterdir() if d.is_dir()}
    by_folder = [(name, d) for name, d in subdirs.items() if name in _FOLDER_LABELS]
    if by_folder:
        out = []
        for name, d in sorted(by_folder):
            label = _FOLDER_LABELS[name]
            out.extend((p.stem, p, label) for p in _iter_images(d))
        return out

    labels_csv = root / "labels.csv"
    if labels_csv.exists():
        label_map = {}
        with open(labels_csv, newline="", encoding="utf-8") as f:
            for i, row in enumerate(csv.DictReader(f), start=2):
                raw = row["label"].strip().upper().replace("-", "_")
                if raw not in Label.__members__:
                    raise ValueError(
                        f"{labels_csv}: line {i}: unknown label {row['label']!r} "
                        f"for id {row['id']!r}"
                    )
                label_map[row["id"]] = Label(raw)
        on_disk = {p.stem: p for p in _iter_images(root)}
        out = []
        for image_id, label in label_map.items():
            if image_id not in on_disk:
                warnings.warn(f"labelled image missing on disk, skipped: {image_id}")
                continue
            out.append((image_id, on_disk[image_id], label))
        return out

    raise ValueError(
        f"{root}: expected AMD/ and Non-AMD/ subfolders or a labels.csv"
    )


def ingest_dataset(
    root: str | Path,
    dataset: SourceDataset,
    grades: dict[str, Grade] | None = None,
) -> DatasetManifest:
    """Build an UNASSIGNED-split manifest from a dataset root.

    Records whose file is missing are warned about and excluded; an image
    without a grade-table entry defaults to GOOD only when no table was
    given at all, otherwise it is a hard error.
    """
    root = Path(root)
    dataset = SourceDataset(dataset)
    records = []
    for image_id, path, label in _labelled_paths(root):
        if not path.exists():
            warnings.warn(f"missing file skipped: {path}")
            continue
        if grades is None:
            grade = Grade.GOOD
        elif image_id in grades:
            grade = grades[image_id]
        else:
            raise ValueError(f"grade table has no entry for image id {image_id!r}")
        records.append(
            ImageRecord(
                id=f"{dataset.value}:{image_id}",
                source_dataset=dataset,
                path=str(path),
                label=label,
                grade=grade,
                split=Split.UNASSIGNED,
            )
        )
    log.info("ingested %d records from %s (%s)", len(records), root, dataset.value)
    return DatasetManifest(records=records)
