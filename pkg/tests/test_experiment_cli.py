import json

import pytest

from congest_matching.cli import main
from congest_matching.experiment import (RECORD_FIELDS, ExperimentSpec, fit_exponents,
                                         run_experiment, run_spec)
from congest_matching.generators import blossom_chain, generate, gnp, long_path
from congest_matching.graph import format_edge_list
from congest_matching.oracle import (OracleConfig, brute_force_augmenting_paths,
                                     max_matching)


def test_long_path_one_is_p4():
    g, m = long_path(1)
    assert sorted(g.edges.values()) == [(0, 1), (1, 2), (2, 3)]
    assert m.pairs() == [(1, 2)]


def test_gnp_is_deterministic_and_connected():
    a, b = gnp(20, 0.2, 7), gnp(20, 0.2, 7)
    assert format_edge_list(a) == format_edge_list(b)
    assert a.is_connected()
    assert format_edge_list(gnp(20, 0.2, 8)) != format_edge_list(a)


def test_blossom_chain_has_disjoint_short_paths():
    k = 3
    g, m = blossom_chain(k)
    assert len(max_matching(g)) == 4 * k
    found = brute_force_augmenting_paths(g, m, 8, OracleConfig(enum_node_limit=8 * k))
    assert all(p.length == 5 for p in found)
    starts = {p.start for p in found}
    assert starts == {8 * j for j in range(k)}
    assert len({v for p in found for v in p.nodes}) == 6 * k  # one per gadget, disjoint


def test_generate_rejects_missing_params():
    with pytest.raises(ValueError):
        generate("gnp", n=10)
    with pytest.raises(ValueError):
        generate("torus", n=10)


def test_long_path_experiment():
    spec = ExperimentSpec(kind="long-path", sizes=[4, 8, 16, 32])
    records = run_spec(spec)
    assert len(records) == 4
    rounds = [r["rounds_total"] for r in records]
    assert rounds == sorted(rounds)
    assert [r["matching"] for r in records] == [5, 9, 17, 33]
    assert all(r["oracle"] == "ok" for r in records)
    for r in records:
        assert set(RECORD_FIELDS) <= set(r)
        assert r["max_bits"] <= r["bandwidth"]
    fit = fit_exponents(records)
    assert len(fit) == 1 and 1.0 < fit[0]["exponent"] < 2.0


def test_square_only_costs_more_than_hybrid():
    spec = ExperimentSpec(kind="long-path", sizes=[16], variants=["hybrid", "square-only"])
    hyb, sq = run_spec(spec)
    assert sq["rounds_total"] >= hyb["rounds_total"]
    assert sq["matching"] == hyb["matching"] == 17


def test_empty_seed_list_gives_empty_report(tmp_path):
    spec_file = tmp_path / "spec.json"
    spec_file.write_text(json.dumps({"kind": "gnp", "sizes": [10], "p": 0.3, "seeds": []}))
    out = tmp_path / "out.jsonl"
    assert main(["experiment", str(spec_file), "--out", str(out)]) == 0
    assert out.read_text() == ""


def test_oracle_skipped_record():
    spec = ExperimentSpec(kind="cycle", sizes=[8], oracle_limit=4)
    (rec,) = run_spec(spec)
    assert rec["oracle"] == "oracle-skipped" and rec["s_max"] is None
    assert rec["matching"] == 4


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec(kind="gnp", variants=["fast"])
    with pytest.raises(ValueError):
        ExperimentSpec.from_dict({"kind": "gnp", "colour": 1})


def test_cli_run_writes_one_record(tmp_path, capsys):
    trace = tmp_path / "trace.txt"
    assert main(["run", "--kind", "fixture", "--name", "blossom6", "--seed", "3",
                 "--trace", str(trace)]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["instance"] == "fixture:blossom6"
    assert rec["matching"] == rec["s_max"] == 3
    assert len(trace.read_text().splitlines()) == rec["messages"]


def test_cli_replay_is_identical(capsys):
    args = ["run", "--kind", "gnp", "--n", "16", "--p", "0.3", "--seed", "5"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_cli_generate_and_read_back(tmp_path, capsys):
    gfile, mfile = tmp_path / "g.txt", tmp_path / "m.txt"
    assert main(["generate", "--kind", "long-path", "--k", "3", "--out", str(gfile),
                 "--matching-out", str(mfile)]) == 0
    assert gfile.read_text().startswith("8 7\n")
    assert len(mfile.read_text().splitlines()) == 3
    assert main(["run", "--graph-file", str(gfile), "--variant", "linear-only"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["matching"] == 4 and rec["variant"] == "linear-only"


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run", "--kind", "gnp", "--n", "5"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["run"])
    with pytest.raises(SystemExit):
        main(["run", "--kind", "cycle", "--n", "6", "--bandwidth-c", "1"])


def test_run_experiment_appends_fit(tmp_path):
    out = tmp_path / "o.jsonl"
    with open(out, "w") as fh:
        run_experiment(ExperimentSpec(kind="cycle", sizes=[6, 10, 14]), fh)
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(rows) == 4 and rows[-1]["fit"] == "rounds_total~s_max"
