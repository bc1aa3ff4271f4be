"""Config loading: defaults, file, environment, overrides."""

import json

import pytest

from lectureqg.config import ENV_VAR, ApiConfig, load_config
from lectureqg.errors import InvalidParameter


def test_defaults():
    cfg = ApiConfig()
    assert cfg.listen_port == 8000
    assert cfg.max_segment_duration_s == 300.0
    assert cfg.summary_ratio == 0.2
    assert cfg.summary_max_words == 100
    assert cfg.top_n == 3
    assert cfg.n_distractors == 3
    assert cfg.blq_per_polarity == 3
    assert cfg.provider_base_url is None


def test_file_overrides_defaults(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"listen_port": 9001, "top_n": 5}))
    cfg = load_config(path)
    assert cfg.listen_port == 9001
    assert cfg.top_n == 5
    assert cfg.summary_ratio == 0.2


def test_env_var_is_used_when_no_path_given(tmp_path, monkeypatch):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"keyword_limit": 7}))
    monkeypatch.setenv(ENV_VAR, str(path))
    assert load_config().keyword_limit == 7


def test_explicit_path_beats_env_var(tmp_path, monkeypatch):
    by_env = tmp_path / "env.json"
    by_env.write_text(json.dumps({"top_n": 9}))
    by_path = tmp_path / "path.json"
    by_path.write_text(json.dumps({"top_n": 4}))
    monkeypatch.setenv(ENV_VAR, str(by_env))
    assert load_config(by_path).top_n == 4


def test_keyword_overrides_beat_the_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"listen_port": 9001}))
    cfg = load_config(path, listen_port=9002, store_root="/tmp/s")
    assert cfg.listen_port == 9002
    assert cfg.store_root == "/tmp/s"


def test_none_overrides_are_ignored(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"listen_port": 9001}))
    assert load_config(path, listen_port=None).listen_port == 9001


def test_unknown_keys_fail_loudly(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"listne_port": 9001}))
    with pytest.raises(InvalidParameter, match="listne_port"):
        load_config(path)


def test_missing_file(tmp_path):
    with pytest.raises(InvalidParameter):
        load_config(tmp_path / "absent.json")


def test_malformed_json(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("{broken")
    with pytest.raises(InvalidParameter):
        load_config(path)


def test_non_object_json(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("[1, 2]")
    with pytest.raises(InvalidParameter):
        load_config(path)


@pytest.mark.parametrize(
    "field", ["max_segment_duration_s", "summary_ratio", "top_n", "blq_per_polarity"]
)
def test_non_positive_tunables_rejected(field):
    with pytest.raises(InvalidParameter, match=field):
        ApiConfig(**{field: 0})
