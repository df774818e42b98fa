import json

import numpy as np
import pytest
from fastapi.testclient import TestClient
from PIL import Image

from fgb.errors import (
    DuplicateResponse,
    InsufficientPool,
    NotComplete,
    NotFound,
    SequenceError,
    UsageError,
)
from fgb.study import (
    ITEMS_PER_SESSION,
    SessionStore,
    StudyKind,
    StudyService,
    create_app,
)


@pytest.fixture(scope="module")
def pools(tmp_path_factory):
    root = tmp_path_factory.mktemp("study_pools")
    pools = {"real": {}, "synth": {}}
    rng = np.random.default_rng(0)
    for origin in ("real", "synth"):
        for label in ("AMD", "NON_AMD"):
            d = root / origin / label
            d.mkdir(parents=True)
            paths = []
            for i in range(12):
                arr = rng.integers(0, 255, (64, 64, 3), np.uint8)
                p = d / f"{origin}_{label}_{i}.png"
                Image.fromarray(arr).save(p)
                paths.append(str(p))
            pools[origin][label] = paths
    return pools


@pytest.fixture()
def service(tmp_path, pools):
    store = SessionStore(tmp_path / "sessions")
    return StudyService(store, real_pools=pools["real"], synth_pools=pools["synth"])


def answer_all(service, session, choice_fn):
    for i, item in enumerate(session.items):
        service.record_response(session.id, i, choice_fn(item), latency_ms=100 + i)


class TestComposition:
    def test_turing_composition(self, service):
        s = service.create_session(StudyKind.TURING_AMD, "reader1", seed=1)
        assert len(s.items) == 20
        truths = [i.truth for i in s.items]
        assert truths.count("REAL") == 10
        assert truths.count("SYNTHETIC") == 10

    def test_diagnosis_composition(self, service):
        s = service.create_session(StudyKind.DIAGNOSIS, "reader1", seed=2)
        truths = [i.truth for i in s.items]
        assert truths.count("AMD") == 10
        assert truths.count("NON_AMD") == 10
        # all items come from the real pools
        assert all("synth" not in i.image_path for i in s.items)

    def test_same_seed_same_order(self, service):
        a = service.create_session(StudyKind.TURING_NON_AMD, "r", seed=5)
        b = service.create_session(StudyKind.TURING_NON_AMD, "r", seed=5)
        assert [i.image_path for i in a.items] == [i.image_path for i in b.items]
        assert [i.truth for i in a.items] == [i.truth for i in b.items]

    def test_insufficient_pool(self, tmp_path, pools):
        store = SessionStore(tmp_path / "s2")
        small = StudyService(
            store,
            real_pools={"AMD": pools["real"]["AMD"][:3], "NON_AMD": pools["real"]["NON_AMD"]},
            synth_pools=pools["synth"],
        )
        with pytest.raises(InsufficientPool):
            small.create_session(StudyKind.TURING_AMD, "r", seed=0)


class TestSequencing:
    def test_fresh_session_starts_at_zero(self, service):
        s = service.create_session(StudyKind.TURING_AMD, "r", seed=3)
        out = service.next_item(s.id)
        assert out["index"] == 0

    def test_next_idempotent_without_response(self, service):
        s = service.create_session(StudyKind.TURING_AMD, "r", seed=3)
        assert service.next_item(s.id) == service.next_item(s.id)

    def test_unknown_session(self, service):
        with pytest.raises(NotFound):
            service.next_item("nope")

    def test_cursor_advances_and_completes(self, service):
        s = service.create_session(StudyKind.TURING_AMD, "r", seed=4)
        for i in range(20):
            ack = service.record_response(s.id, i, "REAL", 50)
            assert ack["cursor"] == i + 1
        assert ack["state"] == "COMPLETE"
        assert service.next_item(s.id) == {"done": True}

    def test_out_of_order_rejected(self, service):
        s = service.create_session(StudyKind.TURING_AMD, "r", seed=4)
        with pytest.raises(SequenceError):
            service.record_response(s.id, 1, "REAL", 10)

    def test_duplicate_rejected(self, service):
        s = service.create_session(StudyKind.TURING_AMD, "r", seed=4)
        service.record_response(s.id, 0, "REAL", 10)
        with pytest.raises(DuplicateResponse):
            service.record_response(s.id, 0, "REAL", 10)

    def test_bad_choice_rejected(self, service):
        s = service.create_session(StudyKind.DIAGNOSIS, "r", seed=4)
        with pytest.raises(UsageError):
            service.record_response(s.id, 0, "SYNTHETIC", 10)


class TestScoring:
    def test_constant_real_responder(self, service):
        s = service.create_session(StudyKind.TURING_AMD, "r", seed=6)
        answer_all(service, s, lambda item: "REAL")
        rep = service.score_session(s.id)
        assert rep.acc == pytest.approx(0.5)
        assert rep.sensitivity == pytest.approx(0.0)
        assert rep.specificity == pytest.approx(1.0)

    def test_clinician2_amd_row(self, service):
        # 4 of 10 synthetic flagged + 7 of 10 real correct -> 0.55/0.40/0.70
        s = service.create_session(StudyKind.TURING_AMD, "r", seed=7)
        synth_seen = real_seen = 0
        for i, item in enumerate(s.items):
            if item.truth == "SYNTHETIC":
                synth_seen += 1
                choice = "SYNTHETIC" if synth_seen <= 4 else "REAL"
            else:
                real_seen += 1
                choice = "REAL" if real_seen <= 7 else "SYNTHETIC"
            service.record_response(s.id, i, choice, 10)
        rep = service.score_session(s.id)
        assert rep.acc == pytest.approx(0.55)
        assert rep.sensitivity == pytest.approx(0.40)
        assert rep.specificity == pytest.approx(0.70)

    def test_perfect_responder(self, service):
        s = service.create_session(StudyKind.TURING_NON_AMD, "r", seed=8)
        answer_all(service, s, lambda item: item.truth)
        rep = service.score_session(s.id)
        assert rep.acc == rep.sensitivity == rep.specificity == 1.0

    def test_balanced_design_identity(self, service):
        rng = np.random.default_rng(3)
        s = service.create_session(StudyKind.TURING_AMD, "r", seed=9)
        answer_all(service, s, lambda item: ("REAL", "SYNTHETIC")[rng.integers(2)])
        rep = service.score_session(s.id)
        assert rep.acc == pytest.approx((rep.sensitivity + rep.specificity) / 2)

    def test_open_session_not_scorable(self, service):
        s = service.create_session(StudyKind.TURING_AMD, "r", seed=10)
        with pytest.raises(NotComplete):
            service.score_session(s.id)


class TestModelComparison:
    def test_all_amd_model(self, service):
        s = service.create_session(StudyKind.DIAGNOSIS, "r", seed=11)
        answer_all(service, s, lambda item: item.truth)
        paired = service.compare_with_model(s.id, lambda path: "AMD")
        model = paired["model"]
        assert model.acc == pytest.approx(0.5)
        assert model.sensitivity == pytest.approx(1.0)
        assert model.specificity == pytest.approx(0.0)

    def test_reports_share_item_lists(self, service):
        s = service.create_session(StudyKind.DIAGNOSIS, "r", seed=12)
        answer_all(service, s, lambda item: "AMD")
        paired = service.compare_with_model(s.id, lambda path: "NON_AMD")
        human_idx = [i["index"] for i in paired["human"].items]
        model_idx = [i["index"] for i in paired["model"].items]
        assert human_idx == model_idx

    def test_turing_session_rejected(self, service):
        s = service.create_session(StudyKind.TURING_AMD, "r", seed=13)
        answer_all(service, s, lambda item: "REAL")
        with pytest.raises(UsageError):
            service.compare_with_model(s.id, lambda path: "AMD")


class TestCrashReplay:
    def test_replay_restores_cursor(self, tmp_path, pools):
        store = SessionStore(tmp_path / "sessions")
        service = StudyService(store, pools["real"], pools["synth"])
        s = service.create_session(StudyKind.TURING_AMD, "r", seed=14)
        for i in range(7):
            service.record_response(s.id, i, "REAL", 5)
        # simulate a crash that lost the snapshot but kept the event log
        (tmp_path / "sessions" / f"{s.id}.json").unlink()
        fresh = StudyService(SessionStore(tmp_path / "sessions"), pools["real"], pools["synth"])
        assert fresh.next_item(s.id)["index"] == 7

    def test_event_before_snapshot_order(self, tmp_path, pools):
        # an acknowledged response must be recoverable from the log alone
        store = SessionStore(tmp_path / "sessions")
        service = StudyService(store, pools["real"], pools["synth"])
        s = service.create_session(StudyKind.TURING_AMD, "r", seed=15)
        service.record_response(s.id, 0, "SYNTHETIC", 5)
        log = (tmp_path / "sessions" / f"{s.id}.events.jsonl").read_text().splitlines()
        events = [json.loads(line) for line in log]
        assert events[-1]["type"] == "response"
        assert events[-1]["choice"] == "SYNTHETIC"


class TestHttpApi:
    @pytest.fixture()
    def client(self, service):
        return TestClient(create_app(service))

    def test_full_session_over_http(self, client):
        created = client.post(
            "/sessions", json={"kind": "TURING_AMD", "reader_id": "dr1", "seed": 21}
        )
        assert created.status_code == 200
        sid = created.json()["id"]

        seen_payloads = []
        for i in range(20):
            nxt = client.get(f"/sessions/{sid}/next")
            assert nxt.status_code == 200
            body = nxt.json()
            seen_payloads.append(nxt.text)
            assert body["index"] == i
            img = client.get(body["image_url"])
            assert img.status_code == 200
            assert img.headers["content-type"] == "image/png"
            seen_payloads.append(str(img.headers))
            ack = client.post(
                f"/sessions/{sid}/responses",
                json={"index": i, "choice": "REAL", "latency_ms": 42},
            )
            assert ack.status_code == 200
            seen_payloads.append(ack.text)

        rep = client.get(f"/sessions/{sid}/report")
        assert rep.status_code == 200
        body = rep.json()
        assert body["acc"] == pytest.approx((body["sensitivity"] + body["specificity"]) / 2)

        # wire-level truth-leak check over everything served pre-completion;
        # server payloads never echo choices, so the labels must be absent
        for payload in seen_payloads:
            assert "REAL" not in payload
            assert "SYNTHETIC" not in payload
            assert "truth" not in payload

    def test_served_image_is_256(self, client):
        import io
        from PIL import Image as PilImage

        sid = client.post(
            "/sessions", json={"kind": "DIAGNOSIS", "reader_id": "dr", "seed": 3}
        ).json()["id"]
        url = client.get(f"/sessions/{sid}/next").json()["image_url"]
        raw = client.get(url).content
        with PilImage.open(io.BytesIO(raw)) as im:
            assert im.size == (256, 256)

    def test_error_shape(self, client):
        out = client.get("/sessions/zzz/next")
        assert out.status_code == 404
        body = out.json()
        assert body["code"] == "NotFound"
        assert "message" in body

    def test_out_of_order_is_409(self, client):
        sid = client.post(
            "/sessions", json={"kind": "TURING_AMD", "reader_id": "dr", "seed": 4}
        ).json()["id"]
        out = client.post(
            f"/sessions/{sid}/responses", json={"index": 3, "choice": "REAL", "latency_ms": 1}
        )
        assert out.status_code == 409
        assert out.json()["code"] == "SequenceError"

    def test_open_report_is_409(self, client):
        sid = client.post(
            "/sessions", json={"kind": "TURING_AMD", "reader_id": "dr", "seed": 5}
        ).json()["id"]
        assert client.get(f"/sessions/{sid}/report").status_code == 409
