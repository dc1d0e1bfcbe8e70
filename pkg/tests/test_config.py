import pytest

from extrifact.config import RunConfig, SearchConfig
from extrifact.errors import InputError


def test_defaults():
    cfg = RunConfig()
    assert cfg.field_char == 2 and cfg.search == SearchConfig()


def test_env_resolution(monkeypatch):
    monkeypatch.setenv("EXTRIFACT_FIELD_CHAR", "7")
    assert RunConfig.resolve().field_char == 7
    assert RunConfig.resolve(3).field_char == 3


@pytest.mark.parametrize("kw", [{"mode": "fast"}, {"cap_extra": -1}, {"jobs": 0}])
def test_bad_search(kw):
    with pytest.raises(InputError):
        SearchConfig(**kw)


def test_bad_run():
    with pytest.raises(InputError):
        RunConfig(field_char=9)
    with pytest.raises(InputError):
        RunConfig(fmt="xml")
