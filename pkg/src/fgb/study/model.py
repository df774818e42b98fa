"""Reader-study domain records.

Truth labels live only in server-side records; anything UI-facing is built
through `public_payload`, which never includes truth before completion.
"""

from dataclasses import dataclass, field, asdict
from enum import Enum

from ..classify.spec import ClassifierMetrics


class StudyKind(str, Enum):
    TURING_AMD = "TURING_AMD"
    TURING_NON_AMD = "TURING_NON_AMD"
    DIAGNOSIS = "DIAGNOSIS"


class SessionState(str, Enum):
    OPEN = "OPEN"
    COMPLETE = "COMPLETE"


TURING_CHOICES = ("REAL", "SYNTHETIC")
DIAGNOSIS_CHOICES = ("AMD", "NON_AMD")

ITEMS_PER_SESSION = 20
PER_ARM = 10


def choices_for(kind: StudyKind) -> tuple[str, str]:
    return DIAGNOSIS_CHOICES if kind is StudyKind.DIAGNOSIS else TURING_CHOICES


def positive_class_for(kind: StudyKind) -> str:
    return "AMD" if kind is StudyKind.DIAGNOSIS else "SYNTHETIC"


@dataclass
class StudyItem:
    handle: str          # opaque id served to the UI
    image_path: str      # server-side only
    truth: str           # REAL/SYNTHETIC or AMD/NON_AMD
    shown_index: int


@dataclass
class StudyResponse:
    shown_index: int
    choice: str
    latency_ms: float


@dataclass
class StudySession:
    id: str
    kind: StudyKind
    items: list[StudyItem]
    reader_id: str
    seed: int
    created_at: str
    cursor: int = 0
    state: SessionState = SessionState.OPEN
    responses: list[StudyResponse] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        d["state"] = self.state.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "StudySession":
        return cls(
            id=d["id"],
            kind=StudyKind(d["kind"]),
            items=[StudyItem(**i) for i in d["items"]],
            reader_id=d["reader_id"],
            seed=d["seed"],
            created_at=d["created_at"],
            cursor=d["cursor"],
            state=SessionState(d["state"]),
            responses=[StudyResponse(**r) for r in d["responses"]],
        )


@dataclass(frozen=True)
class StudyReport:
    session_id: str
    kind: StudyKind
    reader_id: str
    positive_class: str
    acc: float
    sensitivity: float
    specificity: float
    confusion: tuple[tuple[int, int], tuple[int, int]]
    items: list[dict]  # per-item truth, choice, latency_ms

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "kind": self.kind.value,
            "reader_id": self.reader_id,
            "positive_class": self.positive_class,
            "acc": self.acc,
            "sensitivity": self.sensitivity,
            "specificity": self.specificity,
            "confusion": [list(r) for r in self.confusion],
            "items": self.items,
        }


def build_report(
    session: StudySession,
    choices: list[str],
    latencies: list[float | None] | None = None,
) -> StudyReport:
    """Confusion and metrics over (truth, choice) pairs; the kind's positive
    class is SYNTHETIC for discrimination studies, AMD for diagnosis."""
    positive = positive_class_for(session.kind)
    if latencies is None:
        latencies = [None] * len(choices)
    tp = fn = fp = tn = 0
    per_item = []
    for item, choice, latency in zip(session.items, choices, latencies):
        truth_pos = item.truth == positive
        chose_pos = choice == positive
        tp += truth_pos and chose_pos
        fn += truth_pos and not chose_pos
        fp += (not truth_pos) and chose_pos
        tn += (not truth_pos) and not chose_pos
        per_item.append({
            "index": item.shown_index,
            "truth": item.truth,
            "choice": choice,
            "latency_ms": latency,
        })
    metrics = ClassifierMetrics.from_confusion(((tp, fn), (fp, tn)))
    return StudyReport(
        session_id=session.id,
        kind=session.kind,
        reader_id=session.reader_id,
        positive_class=positive,
        acc=metrics.acc,
        sensitivity=metrics.sensitivity,
        specificity=metrics.specificity,
        confusion=metrics.confusion,
        items=per_item,
    )
