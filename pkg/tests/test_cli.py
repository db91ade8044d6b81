import json
import subprocess
import sys

import pytest

from catmod import cli
from catmod.fixtures import arrow, cyclic_product, exactly_n_theory, unary_p, zmod


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def jrun(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


@pytest.fixture
def files(tmp_path):
    def put(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return p

    d = {
        "set2": put("set2.json", exactly_n_theory(2).to_json()),
        "z2": put("z2.json", zmod(2).to_json()),
        "z3": put("z3.json", zmod(3).to_json()),
        "v4": put("v4.json", cyclic_product((2, 2)).to_json()),
        "p1": put("p1.json", unary_p(2, [0]).to_json()),
        "arrow": put("arrow.json", arrow().to_json()),
        "dir": tmp_path,
    }
    broken = arrow().to_json()
    broken["comp"] = [row for row in broken["comp"] if row[:2] != ["a", "1_0"]]
    d["broken"] = put("broken.json", broken)
    return d


def test_build_then_homcount(capsys, files):
    out = files["dir"] / "out"
    code, rep, _ = jrun(capsys, "mod", "build", "--theory", files["set2"], "--max-size", 2, "--out", out)
    assert code == 0 and rep["objects"] == 1
    code, rep, err = jrun(capsys, "cat", "homcount", out / "category.json")
    assert code == 0 and rep == {"count": 4} and err.strip() == "4"


def test_validate_exit_codes(capsys, files):
    code, rep, _ = jrun(capsys, "cat", "validate", files["arrow"])
    assert code == 0 and rep["ok"]
    code, rep, err = jrun(capsys, "cat", "validate", files["broken"])
    assert code == 1 and rep["primary_axiom"] == 1 and "axiom 1" in err


def test_io_error_is_exit_2(capsys, files):
    code, rep, _ = jrun(capsys, "cat", "homcount", files["dir"] / "missing.json")
    assert code == 2 and rep["error"] == "UsageError"


def test_usage_error_is_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["cat", "nosuch"])
    assert exc.value.code == 2
    code, _, _ = run(capsys, "cat", "limit", "fixture:arrow")
    assert code == 2


def test_formula_error_is_exit_2(capsys):
    code, rep, _ = jrun(capsys, "logic", "parse", "group", "forall x:s. (x")
    assert code == 2 and rep["error"] == "FormulaSyntaxError"


def test_negative_verdicts(capsys, files):
    assert run(capsys, "struct", "iso", files["z2"], files["z3"])[0] == 1
    assert run(capsys, "logic", "eval", files["z3"], "forall x:s. x + x = 0")[0] == 1
    assert run(capsys, "cat", "limit", "fixture:discrete(2)", "--pair", "d0", "d1")[0] == 1
    assert run(capsys, "ab", "check", "fixture:discrete(2)")[0] == 1


# -- golden: identical to direct library calls ------------------------------------

def test_golden_homs(capsys, files):
    from catmod.structures import enumerate_homomorphisms

    _, rep, _ = jrun(capsys, "struct", "homs", files["z2"], files["v4"])
    direct = [h.maps_json() for h in enumerate_homomorphisms(zmod(2), cyclic_product((2, 2)))]
    assert rep["homs"] == json.loads(json.dumps(direct))


def test_golden_skeleton(capsys):
    from catmod.fincat import skeleton
    from catmod.fixtures import labeled_two_sets

    _, rep, _ = jrun(capsys, "cat", "skeleton", "fixture:labeled 2-sets")
    S, G = skeleton(labeled_two_sets())
    assert rep["skeleton"] == json.loads(json.dumps(S.to_json()))
    assert rep["functor"] == json.loads(json.dumps(G.to_json()))


def test_golden_agree(capsys):
    from catmod.fixtures import codiscrete, terminal
    from catmod.homotopic import agreement_test

    _, rep, _ = jrun(capsys, "homotopic", "agree", "fixture:codiscrete(2)", "fixture:terminal",
                     "--depth", 3, "--size", 10, "--budget", 40, "--seed", 9)
    direct = agreement_test(codiscrete(2), terminal(), 3, 40, 9, 10).to_json()
    assert rep == json.loads(json.dumps(direct))


def test_golden_translate(capsys):
    from catmod.homotopic import translate_lcat
    from catmod.logic import L_CAT, parse_formula, to_text

    text = "forall X:o. Id(X) o Id(X) = Id(X)"
    _, rep, _ = jrun(capsys, "homotopic", "translate", text)
    assert rep["translation"] == to_text(translate_lcat(parse_formula(text, L_CAT)))


def test_golden_ab(capsys):
    from catmod.abcheck import check_ab, extract_groups
    from catmod.fixtures import zero_z2_v4

    _, rep, _ = jrun(capsys, "ab", "check", "fixture:{0,Z2,V4}")
    assert rep == json.loads(json.dumps(check_ab(zero_z2_v4().category).to_json()))
    code, rep, _ = jrun(capsys, "ab", "extract", "fixture:{0,Z2,V4}", "--generator", "Z2")
    E = extract_groups(zero_z2_v4().category, "Z2")
    assert code == 0 and {k: len(v["carriers"]["s"]) for k, v in rep["groups"].items()} == {
        str(k): len(g.carriers["s"]) for k, g in E.groups.items()}
    code, rep, _ = jrun(capsys, "ab", "arrows", "fixture:{0,Z2,V4}", "--object", "Z2")
    assert rep["group_arrows"] == ["V4>Z2:3"]


def test_golden_ultra(capsys, files):
    from catmod.logic import GROUP_SIG, parse_formula
    from catmod.ultra import los_verify, principal

    s = "exists x:s. ~(x = 0) & x + x = 0"
    _, rep, _ = jrun(capsys, "ultra", "los", files["z2"], files["z3"], "--sentence", s, "--ultra-at", 1)
    direct = los_verify([zmod(2), zmod(3)], principal((0, 1), 1), parse_formula(s, GROUP_SIG))
    assert rep == direct
    fpath = files["dir"] / "f.json"
    fpath.write_text(json.dumps(principal((0, 1), 1).to_json()))
    _, rep2, _ = jrun(capsys, "ultra", "los", files["z2"], files["z3"], "--sentence", s, "--filter", fpath)
    assert rep2 == rep


def test_golden_embed(capsys, files):
    out = files["dir"] / "b"
    run(capsys, "mod", "build", "--theory", files["set2"], "--max-size", 2, "--out", out)
    code, rep, _ = jrun(capsys, "ultra", "embed", out, "--ultra-at", 0)
    assert code == 0 and rep["objects"] == 1 and rep["morphisms"] == 4 and rep["faithful"]


def test_every_subcommand_is_wired():
    ap = cli.build_parser()
    groups = {a.dest: a for a in ap._actions if a.dest == "group"}["group"].choices
    want = {
        "logic": {"parse", "eval", "sentences"},
        "struct": {"validate", "homs", "iso", "ef", "models", "termalg", "pullback"},
        "cat": {"validate", "limit", "colimit", "skeleton", "equiv", "generators", "homcount"},
        "mod": {"build", "coeq", "coprod", "theta"},
        "ultra": {"filters", "rprod", "los", "diag", "embed"},
        "homotopic": {"eval", "qlim", "agree", "translate", "isograph"},
        "ab": {"check", "extract", "arrows"},
    }
    assert set(groups) == set(want)
    for g, cmds in want.items():
        sub = next(a for a in groups[g]._actions if a.dest == "cmd")
        assert set(sub.choices) == cmds


def test_pullback_and_coeq(capsys, files):
    from catmod.fixtures import EMPTY_SIG
    from catmod.structures import FinStructure

    N = files["dir"] / "n.json"
    N.write_text(json.dumps(FinStructure(EMPTY_SIG, {"s": ("a", "b")}).to_json()))
    m = files["dir"] / "map.json"
    m.write_text(json.dumps({"s": [["a", 1], ["b", 0]]}))
    p = files["dir"] / "p.json"
    p.write_text(json.dumps(unary_p(2, [1]).to_json()))
    code, rep, _ = jrun(capsys, "struct", "pullback", "--map", m, p, N)
    assert code == 0 and rep["rels"]["P"] == [["a"]]

    from catmod.fixtures import abelian_theory

    t = files["dir"] / "ab.json"
    t.write_text(json.dumps(abelian_theory().to_json()))
    out = files["dir"] / "ab3"
    run(capsys, "mod", "build", "--theory", t, "--max-size", 3, "--out", out)
    code, rep, _ = jrun(capsys, "mod", "coeq", out, "M2>M2:0", "M2>M2:1")
    assert code == 0 and rep["problems"] == []


# -- determinism and config ------------------------------------------------------------

def test_seeded_output_is_byte_identical(capsys):
    argv = ["logic", "sentences", "lhomo", "--homotopic", "--depth", "3", "--size", "10", "--sample", "25", "--seed", "5"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    assert a == b
    c = run(capsys, *argv[:-1], "6")[1]
    assert c != a


def test_config_env_and_flag(capsys, files, monkeypatch):
    cfg = files["dir"] / "caps.json"
    cfg.write_text(json.dumps({"enum_max_size": 5}))
    monkeypatch.setenv("CATMOD_CONFIG", str(cfg))
    code, rep, _ = jrun(capsys, "logic", "sentences", "lhomo", "--homotopic", "--depth", "2", "--size", "7")
    assert code == 2 and rep["error"] == "BoundsExceeded"
    loose = files["dir"] / "loose.json"
    loose.write_text(json.dumps({"enum_max_size": 12}))
    code, rep, _ = jrun(capsys, "--config", loose, "logic", "sentences", "lhomo", "--homotopic",
                        "--depth", "2", "--size", "7", "--limit", "1")
    assert code == 0 and rep["count"] == 140


def test_config_seed_is_default(capsys, files, monkeypatch):
    cfg = files["dir"] / "seed.json"
    cfg.write_text(json.dumps({"seed": 5}))
    argv = ["logic", "sentences", "lhomo", "--homotopic", "--depth", "3", "--size", "10", "--sample", "5"]
    explicit = run(capsys, *argv, "--seed", "5")[1]
    monkeypatch.setenv("CATMOD_CONFIG", str(cfg))
    assert run(capsys, *argv)[1] == explicit


def test_text_format(capsys):
    code, out, _ = run(capsys, "--format", "text", "cat", "homcount", "fixture:arrow")
    assert code == 0 and out.splitlines()[0] == "3"


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "catmod.cli", "cat", "homcount", "fixture:terminal"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout) == {"count": 1}
