import json

import numpy as np
import pytest
from PIL import Image

from fgb.cli import main
from fgb.config import RunConfig, load_config
from fgb.errors import ConfigError


def write_config(tmp_path, raw):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw))
    return path


def write_images(d, n=8, size=32, shift=0, seed=0):
    d.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    for i in range(n):
        arr = rng.integers(shift, shift + 100, (size, size, 3), np.uint8)
        Image.fromarray(arr).save(d / f"im_{i}.png")


class TestConfig:
    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            RunConfig(raw={"fid": {"set_a": "x", "set_b": "y", "bogus": 1}})

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            RunConfig(raw={"not_a_section": {}})

    def test_hash_stable_under_key_order(self):
        a = RunConfig(raw={"fid": {"set_a": "x", "set_b": "y"}})
        b = RunConfig(raw={"fid": {"set_b": "y", "set_a": "x"}})
        assert a.config_hash == b.config_hash

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "none.json")

    def test_bad_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{nope")
        with pytest.raises(ConfigError):
            load_config(p)


class TestCliCommands:
    def test_bad_config_exit_2(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("FGB_OUT", str(tmp_path / "runs"))
        cfg = write_config(tmp_path, {"fid": {"bogus": True}})
        assert main(["fid", str(cfg)]) == 2

    def test_fid_identical_dirs_near_zero(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("FGB_OUT", str(tmp_path / "runs"))
        imgs = tmp_path / "imgs"
        write_images(imgs)
        cfg = write_config(tmp_path, {"fid": {"set_a": str(imgs), "set_b": str(imgs)}})
        assert main(["fid", str(cfg)]) == 0
        runs = list((tmp_path / "runs").glob("*/fid/fid.json"))
        assert len(runs) == 1
        assert json.loads(runs[0].read_text())["value"] < 1e-3

    def test_restartable_noop_and_force(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("FGB_OUT", str(tmp_path / "runs"))
        imgs = tmp_path / "imgs"
        write_images(imgs)
        cfg = write_config(tmp_path, {"fid": {"set_a": str(imgs), "set_b": str(imgs)}})
        assert main(["fid", str(cfg)]) == 0
        out = capsys.readouterr().out
        assert "FID" in out
        assert main(["fid", str(cfg)]) == 0
        out = capsys.readouterr().out
        assert "already complete" in out
        assert main(["fid", str(cfg), "--force"]) == 0
        out = capsys.readouterr().out
        assert "FID" in out

    def test_artifact_dir_contains_roundtrip_config(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FGB_OUT", str(tmp_path / "runs"))
        imgs = tmp_path / "imgs"
        write_images(imgs)
        raw = {"fid": {"set_a": str(imgs), "set_b": str(imgs)}}
        cfg_path = write_config(tmp_path, raw)
        assert main(["fid", str(cfg_path)]) == 0
        stored = list((tmp_path / "runs").glob("*/fid/config.json"))[0]
        assert json.loads(stored.read_text()) == raw

    def test_prep_deterministic_manifest(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FGB_OUT", str(tmp_path / "runs"))
        raw = {"pipeline": {"toy": {"n": 40, "size": 16}, "seed": 7, "test_per_class": 4}}
        cfg_path = write_config(tmp_path, raw)
        assert main(["prep", str(cfg_path)]) == 0
        manifest = list((tmp_path / "runs").glob("*/prep/manifest.csv"))[0]
        first = manifest.read_bytes()
        assert main(["prep", str(cfg_path), "--force"]) == 0
        assert manifest.read_bytes() == first

    def test_gen_requires_checkpoint(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("FGB_OUT", str(tmp_path / "runs"))
        cfg = write_config(tmp_path, {"gan": {"variant": "DCGAN", "generate_n": 2}})
        assert main(["gen", str(cfg)]) == 3
