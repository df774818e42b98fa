import json

import pytest

from fgb import reference
from fgb.classify import ClassifierMetrics
from fgb.cli import main


class TestPublishedFixtures:
    def test_fid_ranking_order(self):
        ranking = reference.fid_ranking()
        values = [v for _, v in ranking]
        assert values == sorted(values, reverse=True)
        assert ranking[0] == ("EBGAN", 380.18)
        assert ranking[1] == ("CGAN", 342.59)
        assert ranking[-1] == ("STYLEGAN2_ADA", 166.17)
        assert ranking[-2] == ("BEGAN", 225.89)

    def test_style_generator_has_best_published_fid(self):
        best = min(reference.PUBLISHED_FID, key=reference.PUBLISHED_FID.get)
        assert best == "STYLEGAN2_ADA"

    def test_mixed_confusion_matches_derived_metrics(self):
        m = ClassifierMetrics.from_confusion(reference.PUBLISHED_MIXED_CONFUSION)
        assert round(m.precision["AMD"], 2) == 0.81
        assert round(m.recall["AMD"], 2) == 0.86
        assert round(m.f1["AMD"], 2) == 0.83

    def test_real_only_confusion_matches_published_row(self):
        m = ClassifierMetrics.from_confusion(reference.PUBLISHED_REAL_ONLY_CONFUSION)
        assert round(m.precision["AMD"], 2) == 0.87
        assert round(m.recall["AMD"], 2) == 0.73
        assert round(m.f1["AMD"], 2) == 0.79

    def test_diagnosis_rows_internally_consistent(self):
        # balanced 10/10 design: acc = (sens + spec) / 2 for every row
        for acc, sens, spec in reference.PUBLISHED_DIAGNOSIS.values():
            assert acc == pytest.approx((sens + spec) / 2)

    def test_discrimination_rows_internally_consistent(self):
        for acc, sens, spec in reference.PUBLISHED_DISCRIMINATION.values():
            assert acc == pytest.approx((sens + spec) / 2)

    def test_best_p_fixture(self):
        assert reference.PUBLISHED_BEST_P["RESNET18"] == (0.6, 0.83)


class TestReportCommand:
    def test_report_emits_reference_table(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FGB_OUT", str(tmp_path / "runs"))
        cfg = tmp_path / "config.json"
        cfg.write_text(json.dumps({}))
        assert main(["report", str(cfg)]) == 0
        ref_csv = list((tmp_path / "runs").glob("*/report/fid_reference.csv"))[0]
        lines = ref_csv.read_text().splitlines()
        assert lines[0] == "architecture,conditional,published_fid"
        assert lines[1].startswith("EBGAN")
        assert lines[-1].startswith("STYLEGAN2_ADA")
