from .manifest import (
    SourceDataset,
    Label,
    Grade,
    Split,
    RetinaCircle,
    ImageRecord,
    DatasetManifest,
)
from .circle import detect_retina_circle, HoughParams
from .preprocess import crop_and_resize, CropTarget
from .splits import build_splits, filter_by_grade
from .ingest import ingest_dataset, read_grade_table

__all__ = [
    "SourceDataset",
    "Label",
    "Grade",
    "Split",
    "RetinaCircle",
    "ImageRecord",
    "DatasetManifest",
    "detect_retina_circle",
    "HoughParams",
    "crop_and_resize",
    "CropTarget",
    "build_splits",
    "filter_by_grade",
    "ingest_dataset",
    "read_grade_table",
]
