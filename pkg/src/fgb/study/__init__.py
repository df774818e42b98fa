from .model import (
    StudyKind,
    SessionState,
    StudyItem,
    StudyResponse,
    StudySession,
    StudyReport,
    build_report,
    choices_for,
    positive_class_for,
    ITEMS_PER_SESSION,
)
from .store import SessionStore
from .service import StudyService
from .api import create_app

__all__ = [
    "StudyKind",
    "SessionState",
    "StudyItem",
    "StudyResponse",
    "StudySession",
    "StudyReport",
    "build_report",
    "choices_for",
    "positive_class_for",
    "ITEMS_PER_SESSION",
    "SessionStore",
    "StudyService",
    "create_app",
]
