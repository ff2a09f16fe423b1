import pytest

from pellforms.config import Settings, default_families_path, get_settings
from pellforms.errors import ConfigError


def test_defaults():
    settings = get_settings()
    assert settings.digits == 24
    assert settings.max_iter == 200
    assert settings.log_level == "ERROR"
    assert settings.log_dir is None
    assert settings.families_path == default_families_path()


def test_cached():
    assert get_settings() is get_settings()


@pytest.mark.parametrize("name,value", [
    ("PELLFORMS_DIGITS", "many"),
    ("PELLFORMS_WORKERS", "0"),
    ("PELLFORMS_LOG_LEVEL", "verbose"),
])
def test_invalid_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigError):
        Settings.from_env()


def test_dotenv_file(monkeypatch, tmp_path):
    # setenv + delenv so teardown removes whatever load_dotenv adds
    monkeypatch.setenv("PELLFORMS_GRID_KMAX", "1")
    monkeypatch.delenv("PELLFORMS_GRID_KMAX")
    dotenv = tmp_path / ".env"
    dotenv.write_text("PELLFORMS_GRID_KMAX=7\nPELLFORMS_LOG_LEVEL=DEBUG\n")
    settings = Settings.from_env(str(dotenv))
    assert settings.grid_kmax == 7
    # variables already in the environment win
    assert settings.log_level == "ERROR"
