import json
import re

import pytest
from PIL import Image, ImageDraw

from shapecolor.cli import main


def render(path, kind, color, size=64, half=16):
    img = Image.new("RGB", (size, size), (0, 0, 0))
    draw = ImageDraw.Draw(img)
    c = size / 2
    box = [c - half, c - half, c + half, c + half]
    if kind == "disk":
        draw.ellipse(box, fill=color)
    else:
        draw.rectangle(box, fill=color)
    path.parent.mkdir(parents=True, exist_ok=True)
    img.save(path)
    return path


@pytest.fixture(scope="module")
def tiny_dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli") / "data"
    for k, half in enumerate((14, 15, 16)):
        render(root / "reddisk" / f"r{k}.png", "disk", (220, 30, 30), half=half)
        render(root / "greensq" / f"g{k}.png", "square", (30, 220, 30), half=half)
    return root


@pytest.fixture(scope="module")
def trained_model(tmp_path_factory, tiny_dataset):
    out = tmp_path_factory.mktemp("model") / "model.json"
    code = main(
        ["train", "--data", str(tiny_dataset), "--target", "reddisk",
         "--out", str(out), "--canvas", "64"]
    )
    assert code == 0
    return out


class TestTrain:
    def test_writes_model_and_reports_fit(self, tmp_path, tiny_dataset, capsys):
        out = tmp_path / "model.json"
        code = main(
            ["train", "--data", str(tiny_dataset), "--target", "reddisk",
             "--out", str(out), "--canvas", "64"]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert out.is_file()
        assert re.search(r"^final_cost=[0-9.e-]+$", captured.out, re.M)
        assert re.search(r"^iterations=\d+$", captured.out, re.M)
        assert re.search(r"^theta_w_delta=-?[0-9.e-]+$", captured.out, re.M)
        assert captured.err == ""

    def test_unknown_target_fails_with_one_line(self, tmp_path, tiny_dataset, capsys):
        code = main(
            ["train", "--data", str(tiny_dataset), "--target", "mango",
             "--out", str(tmp_path / "m.json"), "--canvas", "64"]
        )
        captured = capsys.readouterr()
        assert code == 1
        err_lines = captured.err.splitlines()
        assert len(err_lines) == 1
        assert "unknown category" in err_lines[0]

    def test_rerun_is_byte_identical(self, tmp_path, tiny_dataset):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert main(
                ["train", "--data", str(tiny_dataset), "--target", "reddisk",
                 "--out", str(out), "--canvas", "64"]
            ) == 0
        assert a.read_bytes() == b.read_bytes()


class TestClassify:
    def test_probe_matching_exemplar_ranks_first(self, tiny_dataset, trained_model, capsys):
        probe = tiny_dataset / "reddisk" / "r0.png"
        code = main(
            ["classify", "--model", str(trained_model), "--exemplars", str(tiny_dataset),
             "--image", str(probe), "--canvas", "64"]
        )
        captured = capsys.readouterr()
        assert code == 0
        lines = captured.out.splitlines()
        assert len(lines) == 2
        assert all(re.fullmatch(r"\d+,[a-z]+,[01]\.\d{6}", ln) for ln in lines)
        assert lines[0].startswith("1,reddisk,")

    def test_single_category_single_line(self, tmp_path, tiny_dataset, trained_model, capsys):
        exemplars = tmp_path / "exemplars"
        render(exemplars / "reddisk" / "r.png", "disk", (220, 30, 30))
        probe = tiny_dataset / "reddisk" / "r0.png"
        code = main(
            ["classify", "--model", str(trained_model), "--exemplars", str(exemplars),
             "--image", str(probe), "--canvas", "64"]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert len(captured.out.splitlines()) == 1

    def test_preprocessing_mismatch_detected(self, tiny_dataset, trained_model, capsys):
        probe = tiny_dataset / "reddisk" / "r0.png"
        code = main(
            ["classify", "--model", str(trained_model), "--exemplars", str(tiny_dataset),
             "--image", str(probe), "--canvas", "128"]
        )
        captured = capsys.readouterr()
        assert code == 1
        err_lines = captured.err.splitlines()
        assert len(err_lines) == 1
        assert "preprocessing mismatch" in err_lines[0]

    def test_undecodable_image_fails(self, tmp_path, tiny_dataset, trained_model, capsys):
        bogus = tmp_path / "bogus.png"
        bogus.write_text("not an image")
        code = main(
            ["classify", "--model", str(trained_model), "--exemplars", str(tiny_dataset),
             "--image", str(bogus), "--canvas", "64"]
        )
        captured = capsys.readouterr()
        assert code == 1
        assert len(captured.err.splitlines()) == 1


class TestEvaluate:
    def test_writes_reports_and_prints_accuracy(self, tmp_path, tiny_dataset, trained_model, capsys):
        out_dir = tmp_path / "results"
        code = main(
            ["evaluate", "--data", str(tiny_dataset), "--model", str(trained_model),
             "--out", str(out_dir), "--canvas", "64"]
        )
        captured = capsys.readouterr()
        assert code == 0
        for name in ("report.csv", "pairs.csv", "histogram.csv", "surface.csv"):
            assert (out_dir / name).is_file()
        assert re.search(r"^overall_accuracy=1\.0$", captured.out, re.M)
        assert re.search(r"^comparisons=12$", captured.out, re.M)

    def test_rerun_is_byte_identical(self, tmp_path, tiny_dataset, trained_model):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out_dir in (out_a, out_b):
            assert main(
                ["evaluate", "--data", str(tiny_dataset), "--model", str(trained_model),
                 "--out", str(out_dir), "--canvas", "64"]
            ) == 0
        for name in ("report.csv", "pairs.csv", "histogram.csv", "surface.csv"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_unwritable_out_dir_fails(self, tmp_path, tiny_dataset, trained_model, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("file, not a directory")
        code = main(
            ["evaluate", "--data", str(tiny_dataset), "--model", str(trained_model),
             "--out", str(blocker), "--canvas", "64"]
        )
        captured = capsys.readouterr()
        assert code == 1
        assert len(captured.err.splitlines()) == 1


class TestConfigHandling:
    def test_config_file_supplies_values(self, tmp_path, tiny_dataset, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"canvas": 64}))
        out = tmp_path / "model.json"
        code = main(
            ["train", "--data", str(tiny_dataset), "--target", "reddisk",
             "--out", str(out), "--config", str(cfg), "--verbose"]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert "config canvas=64" in captured.err

    def test_flags_override_config_file(self, tmp_path, tiny_dataset, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"canvas": 96}))
        out = tmp_path / "model.json"
        code = main(
            ["train", "--data", str(tiny_dataset), "--target", "reddisk",
             "--out", str(out), "--config", str(cfg), "--canvas", "64", "--verbose"]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert "config canvas=64" in captured.err

    def test_unknown_config_key_rejected(self, tmp_path, tiny_dataset, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"canvass": 64}))
        code = main(
            ["train", "--data", str(tiny_dataset), "--target", "reddisk",
             "--out", str(tmp_path / "m.json"), "--config", str(cfg)]
        )
        captured = capsys.readouterr()
        assert code == 1
        assert len(captured.err.splitlines()) == 1
        assert "canvass" in captured.err

    def test_invalid_flag_value_rejected_before_work(self, tmp_path, tiny_dataset, capsys):
        code = main(
            ["train", "--data", str(tiny_dataset), "--target", "reddisk",
             "--out", str(tmp_path / "m.json"), "--canny-low", "200", "--canny-high", "100"]
        )
        captured = capsys.readouterr()
        assert code == 1
        assert len(captured.err.splitlines()) == 1
        assert not (tmp_path / "m.json").exists()


class TestHelp:
    @pytest.mark.parametrize("command", ["train", "classify", "evaluate"])
    def test_help_lists_shared_flags_with_defaults(self, command, capsys):
        with pytest.raises(SystemExit) as exc:
            main([command, "--help"])
        assert exc.value.code == 0
        text = capsys.readouterr().out
        for flag in (
            "--canvas", "--canny-sigma", "--canny-low", "--canny-high",
            "--threshold", "--lr", "--max-iters", "--tol", "--l2",
            "--no-intercept", "--hist-wdelta", "--hist-weps", "--config",
            "--verbose", "--workers",
        ):
            assert flag in text
        assert "default: 256" in text
        assert "default: 1.4" in text
