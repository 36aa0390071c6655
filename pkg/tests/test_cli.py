import json

import pytest

from dtflop import cli
from dtflop.cache import CountCache, count_key
from dtflop.config import ConfigError, RunConfig, parse_dims
from dtflop.errors import CachePoisoned
from dtflop.fqcount import fiber_counts
from dtflop.quiver import build_minus2


def test_parse_dims():
    assert parse_dims("(0,1), (1,1)") == [(0, 1), (1, 1)]
    with pytest.raises(ConfigError):
        parse_dims("0,1")


def test_config_file_and_override(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text("# grid\nd = 2\nprimes = 13\ndims = (0,1)\n")
    cfg = RunConfig.from_file(f)
    assert (cfg.d, cfg.primes, cfg.dims) == (2, [13], [(0, 1)])
    cfg.update("d", 1)
    assert cfg.validate().d == 1
    f.write_text("colour = red\n")
    with pytest.raises(ConfigError):
        RunConfig.from_file(f)


def test_exit_codes(tmp_path, capsys):
    out = str(tmp_path / "r")
    assert cli.main(["verify", "--d", "1", "--primes", "5", "--dims", "(0,1),(1,1)", "--out", out]) == 0
    assert cli.main(["verify", "--d", "2", "--primes", "5", "--out", out]) == 2
    assert cli.main(["verify", "--d", "1", "--primes", "5", "--dims", "(3,3)", "--out", out]) == 3
    assert cli.main(["verify", "--d", "1", "--steps", "--out", out]) == 2
    assert cli.main(["verify", "--d", "1", "--steps", "--p", "3", "--n", "(1,1)", "--out", out]) == 0
    err = capsys.readouterr().err
    assert "not 1 mod 12" in err and "refused" in err


def test_report_byte_stable(tmp_path):
    def run(tag):
        out = tmp_path / tag
        cli.main(["verify", "--d", "1", "--primes", "5", "--dims", "(0,1),(1,1)", "--out", str(out)])
        docs = json.loads((out / "verify_d1_all.json").read_text())
        for doc in docs:
            doc.pop("timestamp")
            for r in doc["results"]:
                r.pop("runtimeMs")
        return json.dumps(docs, sort_keys=True), (out / "verify_d1_all.csv").read_bytes()
    assert run("a") == run("b")


def test_cache_roundtrip_and_poison(tmp_path):
    cache = CountCache(tmp_path / "c")
    Q, W = build_minus2(1)
    key = count_key(Q.key(), str(W), (1, 1), 3, "all", "enumerate")
    cv = cache.fetch(key, lambda: fiber_counts(Q, W, (1, 1), 3))
    assert cache.misses == 1 and cache.get(key) == cv and cache.hits == 1
    assert cache.export_csv(tmp_path / "c.csv") == 1
    path = cache._path(key)
    entry = json.loads(path.read_text())
    entry["counts"][1] += 1
    path.write_text(json.dumps(entry))
    with pytest.raises(CachePoisoned):
        cache.get(key)


def test_cached_verify_matches(tmp_path):
    args = ["verify", "--d", "1", "--primes", "5", "--dims", "(1,1)", "--cache", str(tmp_path / "c")]
    assert cli.main(args + ["--out", str(tmp_path / "a")]) == 0
    assert cli.main(args + ["--out", str(tmp_path / "b")]) == 0
    assert list((tmp_path / "c").glob("*.json"))


def test_table(tmp_path, capsys):
    assert cli.main(["table", "--d", "2", "--dmax", "3", "--out", str(tmp_path)]) == 0
    rows = json.loads((tmp_path / "omega_d2.json").read_text())
    assert any(r["statement"] == "(1-[mu_3])*L^(-1/2)" for r in rows)
    assert "P^1*L^(-3/2)" in capsys.readouterr().out
