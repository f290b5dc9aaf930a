import json
import random
import shutil
import subprocess

import pytest

from df3forge import pipeline as PL
from df3forge import syntax as S
from df3forge.checks import mutate_statement
from df3forge.cli import main, read_statement
from df3forge.proofs.checker import Proof, ProofLine, check_proof, render_proof
from df3forge.proofs.library import proof_library

LIB = proof_library()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- parse

def test_parse_canonical(capsys):
    code, out, _ = run(capsys, "parse", "Ax. P(x,y,z)")
    assert code == 0 and S.parse("FMD3", out) is S.parse("FMD3", "Ax. P(x,y,z)")


@pytest.mark.parametrize("argv", [
    ["parse", "--lang", "l3", "in(y,x)"],
    ["parse", "P(x,y"],
    ["parse", "--lang", "nope", "p"],
    ["parse"],
    ["frobnicate"],
    ["translate", "--from", "fol", "--to", "fmd3"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_missing_file_exits_2(capsys, tmp_path):
    assert run(capsys, "check-proof", "--proof", str(tmp_path / "none.txt"))[0] == 2


def test_parse_shared_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "parse", "--shared", "Ex. (P(x,y,z) | Ey. P(x,y,z))")
    assert code == 0
    path = write(tmp_path, "f.fmd", out)
    code, out2, _ = run(capsys, "parse", "--in", path)
    assert code == 0 and out2.strip() == "Ex. (P(x,y,z) | Ey. P(x,y,z))"


# -- translate

def test_translate_modal_round_trip(capsys, tmp_path):
    src = write(tmp_path, "f.fmd", "(Ex. Ey. P(x,y,z)) -> Ey. Ex. P(x,y,z)\n")
    mod = str(tmp_path / "f.modal")
    back = str(tmp_path / "g.fmd")
    assert run(capsys, "translate", "--from", "fmd3", "--to", "modal", "--in", src, "--out", mod)[0] == 0
    assert S.parse("MODAL", open(mod).read()) is S.parse("MODAL", "<1><2>p -> <2><1>p")
    assert run(capsys, "translate", "--from", "modal", "--to", "fmd3", "--in", mod, "--out", back)[0] == 0
    assert S.parse("FMD3", open(back).read()) is S.parse("FMD3", open(src).read())


def test_translate_eq_and_report(capsys, tmp_path):
    src = write(tmp_path, "f.fmd", "Ex. P(x,y,z)\n")
    rep = str(tmp_path / "r.json")
    code, out, _ = run(capsys, "translate", "--from", "fmd3", "--to", "eq", "--in", src,
                       "--report", rep)
    assert code == 0 and out.strip() == "f X0"
    d = json.loads(open(rep).read())
    assert d["nodes_shared"] >= 1 and "millis" in d


def test_translate_l3_closes_open_input(capsys, tmp_path):
    # large outputs come back in the shared format
    src = write(tmp_path, "f.l3", "in(x,y)\n")
    out = str(tmp_path / "o.fmd")
    assert run(capsys, "translate", "--from", "l3", "--to", "fmd3", "--in", src, "--out", out)[0] == 0
    g = read_statement(open(out).read(), "fmd3")
    assert g is PL.h(S.parse("L3", "Ax. Ay. in(x,y)"))


def test_outputs_are_byte_identical(capsys, tmp_path):
    src = write(tmp_path, "f.fmd", "Ax. (Ey. P(x,y,z) -> Ez. P(x,y,z))\n")
    outs = []
    for i in range(2):
        o = str(tmp_path / f"o{i}.modal")
        run(capsys, "translate", "--from", "fmd3", "--to", "modal", "--in", src, "--out", o)
        outs.append(open(o, "rb").read())
    assert outs[0] == outs[1]


# -- check-proof

def test_check_proof_accepts_library(capsys, tmp_path):
    for name in ("ax8_from_base", "eq_invariance"):
        path = write(tmp_path, f"{name}.prf", render_proof(LIB[name]))
        code, out, _ = run(capsys, "check-proof", "--proof", path)
        assert code == 0 and out.startswith("accepted")


def test_check_proof_rejects_tampered(capsys, tmp_path):
    p = LIB["ax8_from_base"]
    rng = random.Random(3)
    for k in range(len(p.lines)):
        new = mutate_statement(rng, p.lines[k].statement)
        lines = list(p.lines)
        lines[k] = ProofLine(p.lines[k].index, new, p.lines[k].justification)
        bad = Proof(p.system, lines, p.hypotheses)
        if new is not p.lines[k].statement and not check_proof(bad).accepted:
            break
    path = write(tmp_path, "bad.prf", render_proof(bad))
    code, out, _ = run(capsys, "check-proof", "--proof", path)
    assert code == 1 and out.startswith("rejected at line")


def test_check_proof_malformed(capsys, tmp_path):
    path = write(tmp_path, "m.prf", "system: HILBERT3\n1. P(x,y,z) ; MP 4 5\n")
    assert run(capsys, "check-proof", "--proof", path)[0] == 2


def test_check_proof_with_hyps(capsys, tmp_path):
    proof = ("system: HILBERT3\n"
             "1. P(x,y,z) ; HYP h\n"
             "2. P(x,y,z) -> Ex. P(x,y,z) ; AX 3\n"
             "3. Ex. P(x,y,z) ; MP 1 2\n")
    hyps = write(tmp_path, "h.txt", "h := P(x,y,z)\n")
    path = write(tmp_path, "p.prf", proof)
    code, out, err = run(capsys, "check-proof", "--proof", path, "--system", "hilbert3", "--hyps", hyps)
    assert code == 0, out + err
    assert run(capsys, "check-proof", "--proof", path, "--hyps", hyps)[0] == 2


# -- modelcheck, oracle

MODEL = '{"universe": 2, "P": [[0,0,0],[1,1,1],[0,1,0],[0,1,1]]}'


def test_modelcheck(capsys, tmp_path):
    m = write(tmp_path, "m.json", MODEL)
    taut = write(tmp_path, "t.fmd", "P(x,y,z) | ~P(x,y,z)\n")
    atom = write(tmp_path, "a.fmd", "P(x,y,z)\n")
    assert run(capsys, "modelcheck", "--model", m, "--formula", taut)[:2] == (0, "true\n")
    assert run(capsys, "modelcheck", "--model", m, "--formula", atom)[:2] == (1, "false\n")
    junk = write(tmp_path, "j.json", "{")
    assert run(capsys, "modelcheck", "--model", junk, "--formula", atom)[0] == 2


def test_oracle(capsys, tmp_path):
    f = write(tmp_path, "f.fol", "Ev0. Av1. ~in(v1,v0)\n")
    code, out, _ = run(capsys, "oracle", "--formula", f, "--rank", "3", "--margin", "0")
    assert code == 0 and out.startswith("TRUE_STABLE")
    g = write(tmp_path, "g.fol", "Av0. Ev1. in(v0,v1)\n")
    assert run(capsys, "oracle", "--formula", g, "--margin", "0")[0] == 1
    assert run(capsys, "oracle", "--formula", f, "--rank", "6")[0] == 2


# -- dump-ax, stats, selftest

def test_dump_ax(capsys, tmp_path):
    out = str(tmp_path / "ax.fmd")
    code, text, _ = run(capsys, "dump-ax", "--out", out)
    assert code == 0
    d = json.loads(text)
    assert d["conjuncts"] == {"A1": 91125, "A2": 882, "A3": 2700, "A4": 9}
    assert d["H"] == 15
    with open(out) as fh:
        assert fh.readline().startswith("# df3-forge shared")


def test_stats(capsys, tmp_path):
    f = write(tmp_path, "f.fmd", "Ey. Ez. P(x,y,z)\n")
    code, out, _ = run(capsys, "stats", "--formula", f)
    assert code == 0
    assert "models n=2 {P+in}: 4096" in out and "free: ['x']" in out and "|H|: 15" in out


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest", "--level", "quick")
    assert code == 0, out
    assert "models n=2 {P+in}: 4096" in out and "6/6 passed" in out


def test_selftest_catches_broken_schema(capsys):
    code, out, _ = run(capsys, "selftest", "--inject-broken-schema")
    assert code == 1 and "FAIL  [1]" in out


@pytest.mark.skipif(shutil.which("df3forge") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["df3forge", "parse", "Ex. P(x,y,z)"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "Ex. P(x,y,z)"
    r = subprocess.run(["df3forge", "parse", "--lang", "l3", "in(y,x)"], capture_output=True, text=True)
    assert r.returncode == 2
