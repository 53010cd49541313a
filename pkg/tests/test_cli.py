import json

import pytest

from splitorder.cli import (
    ProblemError,
    ProblemFile,
    cmd_scan,
    load_problem,
    main,
    read_log,
    summarize,
)

QUINTIC = """\
# Fermat quintic threefold
p = 7
e = 2
weights = 1,1,1,1,1
d = 5
f = x0^5+x1^5+x2^5+x3^5+x4^5
n_max = 2
verdict = auto
"""

CUBIC_CURVE = "weights = 1,1,1\nd = 3\nf = x0^3 + x1^3 + x2^3\nn_max = 2\n"


@pytest.fixture
def write(tmp_path):
    def _write(text, name="problem.txt"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write


def test_load_problem():
    prob = load_problem(QUINTIC)
    assert prob == ProblemFile((1,) * 5, 5, "x0^5+x1^5+x2^5+x3^5+x4^5", p=7, e=2, n_max=2)


@pytest.mark.parametrize(
    "text,msg",
    [
        ("weights = 1,1\nd = 2\n", "missing required key 'f'"),
        ("weights = 1,x\nd = 2\nf = x0^2\n", "line 1"),
        ("weights = 1\nd = 1\nf = x0\ncolour = red\n", "unknown key"),
        ("weights = 1\nd = 1\nd = 2\nf = x0\n", "duplicate"),
        ("weights = 1\nd = 1\nf = x0\nverdict = maybe\n", "verdict"),
        ("weights = 1\nd = 1\nf = x0\nprimes = 3-5\n", "A..B"),
        ("just text\n", "key = value"),
    ],
)
def test_load_problem_errors(text, msg):
    with pytest.raises(ProblemError, match=msg):
        load_problem(text)


def test_analyze_quintic_json(write, capsys):
    assert main(["analyze", str(write(QUINTIC))]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["conclusion"] == "PerfectoidSplit"
    assert "Theorem 3.2" in out["basis"] and "Corollary 2.7" in out["basis"]
    assert set(out) >= {"problem", "checks", "evidence", "conclusion", "basis", "version"}
    assert set(out["problem"]) >= {"p", "e", "weights", "d", "f_canonical"}
    assert set(out["evidence"]) >= {"prefix", "bounded", "ppt", "primary", "nm", "thresholds"}
    assert {"lower_num", "lower_den", "depth"} <= set(out["evidence"]["ppt"])


def test_analyze_table(write, capsys):
    assert main(["analyze", str(write(QUINTIC)), "--format", "table", "--n-max", "1"]) == 0
    out = capsys.readouterr().out
    assert "conclusion  PerfectoidSplit" in out
    assert "depth 1/1" in out


def test_violation_still_exits_zero(write, capsys):
    assert main(["analyze", str(write(QUINTIC.replace("p = 7", "p = 5")))]) == 0
    assert json.loads(capsys.readouterr().out)["conclusion"] == "HypothesisViolation"


def test_point_problem(write, capsys):
    assert main(["analyze", str(write("p = 3\nweights = 1\nd = 1\nf = x0\n"))]) == 0
    out = json.loads(capsys.readouterr().out)
    assert "conclusion" in out
    assert out["evidence"]["prefix"] == [0, 0, 0, 0]


def test_malformed_polynomial(write, capsys):
    path = write(QUINTIC.replace("x0^5+x1^5", "x0^5+*x1^5"))
    assert main(["analyze", str(path)]) == 2
    err = capsys.readouterr().err
    assert "offset 5" in err and "^" in err


@pytest.mark.parametrize(
    "text,msg",
    [
        (QUINTIC.replace("d = 5", "d = 4"), "weighted degree 5"),
        (QUINTIC.replace("p = 7", "p = 8"), "not prime"),
        (QUINTIC.replace("+x4^5", "+x4"), "homogeneous"),
        ("weights = 1,1\nd = 1\nf = x0\n", "'p'"),
        ("p = 3\nweights = 2,2\nd = 4\nf = x0^2 + x1^2\n", "well-formed"),
    ],
)
def test_input_errors(write, capsys, text, msg):
    assert main(["analyze", str(write(text))]) == 2
    assert msg in capsys.readouterr().err


def test_allow_ill_formed(write, capsys):
    path = write("p = 3\nweights = 2,2\nd = 4\nf = x0^2 + x1^2\n")
    assert main(["analyze", str(path), "--allow-ill-formed"]) == 0
    assert json.loads(capsys.readouterr().out)["conclusion"] == "PerfectoidPure"


def test_missing_file(tmp_path, capsys):
    assert main(["analyze", str(tmp_path / "nope.txt")]) == 2


def test_scan_and_idempotent_rerun(write, tmp_path, capsys):
    path, log = write(CUBIC_CURVE), tmp_path / "scan.jsonl"
    assert main(["scan", str(path), "--primes", "2..13", "--out", str(log)]) == 0
    first = log.read_text().splitlines()
    assert [json.loads(line)["prime"] for line in first] == [2, 3, 5, 7, 11, 13]
    assert main(["scan", str(path), "--primes", "2..13", "--out", str(log)]) == 0
    assert log.read_text().splitlines() == first
    summary = capsys.readouterr().out
    assert "(6 rows)" in summary


def test_scan_log_round_trips(write, tmp_path):
    log = tmp_path / "scan.jsonl"
    rows = cmd_scan(load_problem(CUBIC_CURVE), (2, 7), log)
    for line in log.read_text().splitlines():
        assert json.dumps(json.loads(line), sort_keys=True) == line
    assert summarize(read_log(log)) == rows


def test_scan_empty_range(write, tmp_path, capsys):
    log = tmp_path / "scan.jsonl"
    assert main(["scan", str(write(CUBIC_CURVE)), "--primes", "24..28", "--out", str(log)]) == 0
    assert log.exists() and log.read_text() == ""
    assert "(0 rows)" in capsys.readouterr().out


def test_scan_records_errors_and_continues(tmp_path):
    prob = load_problem("weights = 1,1,1\nd = 3\nf = 3*x0^3 + 3*x1^3 + 3*x2^3\nn_max = 1\n")
    rows = cmd_scan(prob, (2, 7), tmp_path / "scan.jsonl")
    assert dict(rows)[3] == "Error"
    assert dict(rows)[7] != "Error"
    rec = next(r for r in read_log(tmp_path / "scan.jsonl") if r["prime"] == 3)
    assert "vanishes" in rec["error"]


def test_scan_parallel_matches_serial(tmp_path):
    prob = load_problem(CUBIC_CURVE)
    serial = cmd_scan(prob, (2, 13), tmp_path / "a.jsonl")
    parallel = cmd_scan(prob, (2, 13), tmp_path / "b.jsonl", jobs=3)
    assert serial == parallel


def test_scan_needs_range(write, tmp_path, capsys):
    assert main(["scan", str(write(CUBIC_CURVE)), "--out", str(tmp_path / "x.jsonl")]) == 2


def test_scan_unwritable_log(write, tmp_path):
    out = tmp_path / "missing" / "scan.jsonl"
    assert main(["scan", str(write(CUBIC_CURVE)), "--primes", "2..5", "--out", str(out)]) == 2


def test_bad_prime_range_flag(write, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["scan", str(write(CUBIC_CURVE)), "--primes", "2-5", "--out", str(tmp_path / "x")])
    assert exc.value.code == 2
