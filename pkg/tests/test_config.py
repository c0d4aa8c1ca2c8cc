import pytest

from gamowlab.config import DEFAULTS, load_config
from gamowlab.errors import ValidationError
from gamowlab.model import DeltaShellModel


def write(tmp_path, text):
    p = tmp_path / "run.ini"
    p.write_text(text)
    return str(p)


def test_defaults():
    cfg = load_config()
    assert cfg.model() == DeltaShellModel(10.0, 1.0, 1.0)
    assert cfg.quadrature().rel_tol == 1e-9
    assert cfg.output_format() == "csv"
    assert len(cfg.gamma_grid()) == 25
    assert cfg.time_grid()[0] == 0 and cfg.time_grid()[-1] == 200


def test_file_and_override(tmp_path):
    path = write(tmp_path, "[model]\nstrength = 20\nradius = 2\n")
    cfg = load_config(path, ("model.radius=3",))
    assert cfg.model() == DeltaShellModel(20.0, 3.0)


def test_error_names_field_and_line(tmp_path):
    path = write(tmp_path, "[model]\nstrength = 10\nradius = -1\n")
    with pytest.raises(ValidationError, match=r"\[model\] radius \(line 3\): must be positive"):
        load_config(path).model()


def test_not_a_number(tmp_path):
    path = write(tmp_path, "[survival]\nwidth = wide\n")
    with pytest.raises(ValidationError, match=r"\[survival\] width \(line 2\): expected a number"):
        load_config(path).density()


def test_unknown_section(tmp_path):
    with pytest.raises(ValidationError, match="unknown section"):
        load_config(write(tmp_path, "[modle]\nstrength = 1\n"))


def test_unknown_key(tmp_path):
    with pytest.raises(ValidationError, match=r"\[model\] strenght \(line 2\): unknown key"):
        load_config(write(tmp_path, "[model]\nstrenght = 1\n"))


@pytest.mark.parametrize("item", ["model.strength", "strength=1", "nosuch.key=1"])
def test_bad_override(item):
    with pytest.raises(ValidationError):
        load_config(None, (item,))


def test_missing_file(tmp_path):
    with pytest.raises(ValidationError, match="cannot read"):
        load_config(str(tmp_path / "absent.ini"))


def test_time_grid_negative():
    with pytest.raises(ValidationError, match="non-negative"):
        load_config(None, ("survival.times=-1, 0, 1",)).time_grid()


def test_time_grid_log():
    grid = load_config(None, ("survival.t_min=1", "survival.t_max=100", "survival.samples=3", "survival.spacing=log")).time_grid()
    assert grid == pytest.approx([1, 10, 100])


def test_gamma_grid_too_short():
    with pytest.raises(ValidationError, match="at least 4"):
        load_config(None, ("compare-gamma.gammas=0.1",)).gamma_grid()


def test_window_must_be_lower():
    with pytest.raises(ValidationError, match="lower half plane"):
        load_config(None, ("poles.im_max=1",)).pole_search()


def test_unknown_observable():
    with pytest.raises(ValidationError, match="unknown observable"):
        load_config().observable("average", "momentum", 1.0, "observables")


def test_resolved_covers_every_section():
    assert set(load_config().resolved()) == set(DEFAULTS)
