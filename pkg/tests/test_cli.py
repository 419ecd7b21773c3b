import json

import pytest

from lacunary.cli import EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, parse_set
from lacunary.group import parse_group


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "identities", "--group", "2^4")
    assert code == EXIT_OK and "0 failed" in out


def test_verify_chebotarev(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "chebotarev", "--p", "5")
    assert code == EXIT_OK


def test_verify_composite_prime_is_usage_error(capsys):
    assert run(capsys, "verify", "--suite", "chebotarev", "--p", "4")[0] == EXIT_USAGE


def test_malformed_group(capsys):
    code, _, err = run(capsys, "dissoc", "check", "--group", "2,x", "--set", "1")
    assert code == EXIT_USAGE and "error" in err


def test_dissoc_check(capsys):
    assert run(capsys, "dissoc", "check", "--group", "7", "--set", "1,2,3")[1].strip() == "+1 +1 -1"
    assert run(capsys, "dissoc", "check", "--group", "7", "--set", "1,2")[1].strip() == "dissociated"


def test_dissoc_greedy_subspace(capsys):
    code, out, _ = run(capsys, "dissoc", "greedy", "--group", "2^4", "--set", "subspace:1,2")
    assert code == EXIT_OK and out.strip() == "{1,2}"


def test_dissoc_cap(capsys):
    elems = ",".join(str(1 << i) for i in range(27))
    assert run(capsys, "dissoc", "check", "--group", "2^30", "--set", elems)[0] == EXIT_CAP


def test_sweep_count_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run(capsys, "sweep", "chang", "--count", "100", "--seed", "7", "--out", str(a))[0] == EXIT_OK
    assert run(capsys, "sweep", "chang", "--count", "100", "--seed", "7", "--out", str(b))[0] == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 100


def test_sweep_tiny_budget_fails(capsys):
    code, out, _ = run(capsys, "sweep", "bilinear", "--count", "5", "--budget", "0.0001")
    assert code == EXIT_FAIL and "exceed budget" in out


def test_sweep_unknown(capsys):
    assert run(capsys, "sweep", "nope")[0] == EXIT_USAGE


def test_sweep_csv_and_constants(capsys, tmp_path):
    out, cons = tmp_path / "r.csv", tmp_path / "c.json"
    args = ("sweep", "rudin", "--count", "8", "--format", "csv", "--out", str(out), "--constants", str(cons))
    assert run(capsys, *args)[0] == EXIT_OK
    assert out.read_text().startswith("name,instance,")
    assert json.loads(cons.read_text())["rudin/p=2/C"] == pytest.approx(2**-0.5, abs=1e-9)


def test_eval_commands(capsys):
    code, out, _ = run(capsys, "eval", "chang", "--group", "7", "--lambda", "1,2", "--set", "0")
    rec = json.loads(out)
    assert code == EXIT_OK and rec["lhs"] == pytest.approx(2.0)
    code, out, _ = run(capsys, "eval", "higher-moment", "--group", "64", "--lambda", "1,2,4",
                       "--set", "interval:0:9", "--l", "3")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "eval", "popular-sums", "--group", "2^4", "--set", "subspace:1,2,4",
                       "--set", "subspace:1,2,4", "--r", "8")
    assert json.loads(out)["lhs"] == 3
    code, out, _ = run(capsys, "eval", "dual-convolution", "--group", "7", "--lambda", "2",
                       "--set", "0,1", "--set", "0,1")
    assert code == EXIT_OK and len(out.splitlines()) >= 2


def test_eval_usage_errors(capsys):
    assert run(capsys, "eval", "chang", "--group", "7", "--lambda", "1,2,3", "--set", "0")[0] == EXIT_USAGE
    assert run(capsys, "eval", "higher-moment", "--group", "7", "--lambda", "1", "--set", "0")[0] == EXIT_USAGE
    assert run(capsys, "eval", "chang", "--group", "7", "--lambda", "1", "--set", "9")[0] == EXIT_USAGE


def test_parse_set_grammar():
    g = parse_group("2,3")
    assert parse_set(g, "(1,2),(0,1)").elements().tolist() == [1, 5]
    assert parse_set(g, "interval:1:3").elements().tolist() == [1, 2, 3]
    assert parse_set(g, "random:3:1").cardinality == 3
    assert parse_set(parse_group("2^3"), "subspace:1,2").elements().tolist() == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        parse_set(g, "(1,2,3)")
