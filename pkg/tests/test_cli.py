import io
import json

import pytest

from perfchar import cli
from perfchar.cli import run_cli
from perfchar.errors import ResourceExceeded
from perfchar.reports import SCHEMA


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(argv):
    code, out, err = run(argv)
    assert code == 0, err
    data = json.loads(out)
    assert data["schema"] == SCHEMA
    return data


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return path

    return {
        "f2xy": write("f2xy.json", {"char": 2, "vars": ["x", "y"]}),
        "uv": write("uv.json", {"char": 2, "vars": ["x", "y"], "relations": ["x*y"]}),
        "node3": write("node3.json", {"char": 3, "vars": ["x", "y"], "relations": ["x*y"]}),
        "r": write("r.json", {"char": 2, "vars": ["t", "u"], "relations": ["u^2 - t^3 - t^2"]}),
        "n": write("n.json", {"char": 2, "vars": ["t", "s"], "relations": ["s^2 - t - 1"]}),
        "r3": write("r3.json", {"char": 3, "vars": ["t", "u"], "relations": ["u^2 - t^3 - t^2"]}),
        "n3": write("n3.json", {"char": 3, "vars": ["t", "s"], "relations": ["s^2 - t - 1"]}),
        "e": write("e.json", {"images": {"t": "t", "ts": "t*s"}}),
        "z16": write("z16.json", {"modulus": 16}),
        "f2x_mod_x": write("q.json", {"char": 2, "vars": ["x"], "quotient": ["x"]}),
        "dir": tmp_path,
    }


def test_classify_example(files):
    data = run_json(["classify", "--ring", files["r"], "--normalization", files["n"], "--embedding", files["e"]])
    assert data["coherent"] is True and data["verdict"] == {"kind": "Coherent", "n": 1}
    data = run_json(["classify", "--ring", files["r3"], "--normalization", files["n3"], "--embedding", files["e"]])
    assert data["coherent"] is False and data["verdict"]["witness"] == "s"


def test_hk_example(files):
    data = run_json(["hk", "--ring", files["f2xy"], "--ideal", "x,y", "--max-level", 3])
    assert [r["ratio"] for r in data["rows"]] == ["1"] * 4
    assert data["rationality"].startswith("known")


def test_hk_node_with_fit(files):
    data = run_json(["hk", "--ring", files["node3"], "--ideal", "x,y", "--max-level", 4, "--fit-seibert"])
    assert [r["length"] for r in data["rows"]][-1] == 161
    assert data["rows"][1]["ratio"] == "5/3"
    assert data["rationality"].startswith("not asserted")


def test_tor_example(files):
    data = run_json(["tor", "--ring", files["uv"], "--left", "x", "--right", "y", "--index", 2, "--level", 1])
    assert data["dimension"] == 1


def test_other_subcommands_run(files):
    assert run_json(["grade", "--ring", files["uv"], "--sequence", "x, y"])["consistent"]
    assert run_json(["invariants", "--ring", files["uv"]])["coherent"] is False
    assert run_json(["witt", "--char", 2, "--length", 2, "--add", "1,0", "1,0"])
    assert run_json(["witt", "--char", 3, "--length", 2, "--table"])
    assert run_json(["valuation", "--char", 2, "--element", "x^(3/4)+x"])["valuation"] == "3/4"
    data = run_json(["ext1-check", "--char", 2, "--length", 4, "--seed", "x^(1/8)"])
    assert data["recovered"] == "1" and data["bound"] == "7/8"
    data = run_json(["tilt", "--ring", files["z16"], "--length", 4])
    assert data["cardinality"] == 2
    data = run_json(["tilt", "--ring", files["f2x_mod_x"], "--length", 3, "--witness", "x^(1/2)"])
    assert data["witness"]["valid"]
    data = run_json(["resolve-colimit", "--ring", files["f2xy"], "--roots", "x, y", "--element", "x"])
    assert data["status"] == "Found"
    assert run_json(["vanish-check", "--ring", files["f2xy"], "--left", "x", "--right", "y", "--samples", 3])


def test_markdown_format(files):
    code, out, _ = run(["invariants", "--ring", files["uv"], "--format", "md"])
    assert code == 0 and out.startswith("# perfchar") and "| quantity |" in out
    code, out2, _ = run(["--format", "md", "invariants", "--ring", files["uv"]])
    assert out2 == out


def test_user_errors_exit_one(files):
    assert run(["no-such-command"])[0] == 1
    assert run([])[0] == 1
    code, out, err = run(["hk", "--ring", files["dir"] / "missing.json", "--ideal", "x"])
    assert code == 1 and out == "" and err.startswith("perfchar:")
    assert run(["valuation", "--char", 3, "--element", "x^(1/2)"])[0] == 1
    assert run(["hk", "--ring", files["f2xy"], "--ideal", "x"])[0] == 1
    assert run(["witt", "--char", 4, "--length", 2, "--table"])[0] == 1


def test_undecided_exits_two(files, monkeypatch):
    code, out, _ = run(["resolve-colimit", "--ring", files["f2xy"], "--roots", "x", "--element", "y",
                        "--max-level", 2])
    assert code == 2 and json.loads(out)["status"] == "Inconclusive"

    def boom(args):
        raise ResourceExceeded("pair budget")

    monkeypatch.setattr(cli, "cmd_invariants", boom)
    code, out, err = run(["invariants", "--ring", files["uv"]])
    assert code == 2 and out == "" and "resource" in err


def test_output_and_figures_are_deterministic(files):
    d = files["dir"]
    commands = {
        "hk.png": ["hk", "--ring", files["node3"], "--ideal", "x,y", "--max-level", 3],
        "chain.svg": ["ext1-check", "--char", 3, "--length", 4, "--seed", "1"],
        "slack.png": ["vanish-check", "--ring", files["f2xy"], "--left", "x", "--right", "x, y", "--samples", 3],
    }
    for name, argv in commands.items():
        runs = []
        for _ in range(2):
            code, out, _ = run(argv + ["--figure", d / name])
            assert code == 0
            runs.append((out, (d / name).read_bytes()))
        assert runs[0] == runs[1] and runs[0][1]


def test_cache_directory_is_honored(tmp_path, monkeypatch):
    from perfchar.witt import witt_polys

    monkeypatch.setenv("PERFCHAR_CACHE_DIR", str(tmp_path / "cache"))
    witt_polys.cache_clear()
    try:
        assert run(["witt", "--char", 5, "--length", 2, "--add", "1,2", "3,4"])[0] == 0
    finally:
        witt_polys.cache_clear()
    assert (tmp_path / "cache" / "witt_p5_n2.txt").exists()
