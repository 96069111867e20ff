import json
from contextlib import nullcontext as does_not_raise
from pathlib import Path
from typing import ContextManager, List

import pytest

import mlcech.settings as settings
from mlcech.errors import SchemaError


def test_defaults() -> None:
    defaults = settings.load_settings()
    assert defaults == settings.DEFAULT_SETTINGS
    assert (defaults.r_cut, defaults.r_inner, defaults.moment_order) == (600.0, 16.0, 30)
    assert defaults.periodicity_tol == 1e-6 and defaults.coefficient_tol == 1e-5


@pytest.mark.parametrize(
    "overrides,expectation",
    [
        (["theta=0.25"], does_not_raise()),
        (["max_push_steps=10", "seed=7"], does_not_raise()),
        (["max_push_order=12.0"], does_not_raise()),
        (["theta"], pytest.raises(SchemaError)),
        (["unknown=1"], pytest.raises(SchemaError)),
        (["theta=abc"], pytest.raises(SchemaError)),
        (["theta=true"], pytest.raises(SchemaError)),
        (["seed=1.5"], pytest.raises(SchemaError)),
        (["theta=1"], pytest.raises(SchemaError)),
        (["safety_factor=0.5"], pytest.raises(SchemaError)),
        (["r_inner=700"], pytest.raises(SchemaError)),
        (["moment_order=0"], pytest.raises(SchemaError)),
    ],
)
def test_overrides(overrides: List[str], expectation: ContextManager) -> None:
    with expectation:
        s = settings.load_settings(overrides=overrides)
        for item in overrides:
            key, _, value = item.partition("=")
            assert getattr(s, key) == json.loads(value), f"{key} wasn't overridden"
            assert type(getattr(s, key)) is type(settings.DEFAULT_SETTINGS._field_defaults[key])


def test_config_file(tmp_path: Path) -> None:
    config = tmp_path / "settings.json"
    config.write_text(json.dumps({"theta": 0.3, "r_cut": 200}))
    s = settings.load_settings(str(config))
    assert s.theta == 0.3 and s.r_cut == 200.0
    assert isinstance(s.r_cut, float)
    # overrides win over the file
    s = settings.load_settings(str(config), ["theta=0.4"])
    assert s.theta == 0.4 and s.r_cut == 200.0


@pytest.mark.parametrize("text", ["[1, 2]", '{"theta": 0.3', '{"theta": "fast"}'])
def test_config_file_errors(text: str, tmp_path: Path) -> None:
    config = tmp_path / "settings.json"
    config.write_text(text)
    with pytest.raises(SchemaError):
        settings.load_settings(str(config))


def test_config_file_missing(tmp_path: Path) -> None:
    with pytest.raises(OSError):
        settings.load_settings(str(tmp_path / "missing.json"))
