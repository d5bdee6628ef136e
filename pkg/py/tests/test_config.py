import pytest

from hlestim.config import EstimatorConfig, load_config
from hlestim.errors import ConfigError


def test_defaults(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = EstimatorConfig.from_env()
    assert cfg == EstimatorConfig()
    assert cfg.eigensolver == "lapack"
    assert cfg.qpe_points == 100_000


def test_environment_overrides(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("HLESTIM_WORKERS", "8")
    monkeypatch.setenv("HLESTIM_EIGENSOLVER", "JACOBI")
    monkeypatch.setenv("HLESTIM_LOG_LEVEL", "info")
    cfg = EstimatorConfig.from_env()
    assert cfg.workers == 8
    assert cfg.eigensolver == "jacobi"
    assert cfg.log_level == "INFO"


def test_dotenv_file_is_read(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / ".env").write_text("HLESTIM_QAE_POINTS=123\nHLESTIM_PORT=6001\n")
    cfg = EstimatorConfig.from_env()
    assert cfg.qae_points == 123
    assert cfg.port == 6001


@pytest.mark.parametrize("name,value", [
    ("HLESTIM_WORKERS", "0"),
    ("HLESTIM_WORKERS", "many"),
    ("HLESTIM_EIGENSOLVER", "arpack"),
    ("HLESTIM_PORT", "70000"),
    ("HLESTIM_LOG_LEVEL", "LOUD"),
])
def test_invalid_values_raise(tmp_path, monkeypatch, name, value):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigError, match=name):
        EstimatorConfig.from_env()


def test_load_config_is_cached(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    first = load_config()
    monkeypatch.setenv("HLESTIM_WORKERS", "9")
    assert load_config() is first
    load_config.cache_clear()
    assert load_config().workers == 9
