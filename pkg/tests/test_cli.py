import csv
import io

import pytest

from distpres.cli import EXIT_PARSE, EXIT_PRECONDITION, EXIT_SIZE_CAP, main

STAR = "# K1,3\ng 4\ne 0 1\ne 0 2\ne 0 3\nS 1 2 3\n"
PAIR = "grid 5 5\nP (0,0) (4,4)\n"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)


@pytest.fixture
def files(tmp_path):
    (tmp_path / "star.txt").write_text(STAR)
    (tmp_path / "pair.txt").write_text(PAIR)
    return tmp_path


def test_solve_auto_and_grid(files, capsys):
    code, out, _ = run(capsys, "solve", "--algo", "auto", files / "star.txt", "--witness", files / "w.txt")
    r = report(out)
    assert code == 0 and r["size"] == "3" and r["algo"] == "vc" and r["ok"] == "true"
    code, out, _ = run(capsys, "solve", "--algo", "grid", files / "pair.txt")
    assert code == 0 and report(out)["size"] == "8"
    code, _, _ = run(capsys, "verify", files / "star.txt", files / "w.txt")
    assert code == 0


@pytest.mark.parametrize("algo", ["brute", "bb", "twdp", "vc"])
def test_solve_each_algo(files, capsys, algo):
    code, out, _ = run(capsys, "solve", "--algo", algo, files / "star.txt")
    assert code == 0 and report(out)["size"] == "3"


def test_solve_with_budget(files, capsys):
    (files / "b.txt").write_text(STAR + "k 2\n")
    code, out, _ = run(capsys, "solve", files / "b.txt")
    assert code == 0 and report(out)["within_budget"] == "false"


def test_exit_codes(files, capsys):
    (files / "bad.txt").write_text("g 3\ne 0 1\nx\n")
    assert run(capsys, "solve", files / "bad.txt")[0] == EXIT_PARSE
    assert run(capsys, "solve", "--algo", "grid", files / "star.txt")[0] == EXIT_PRECONDITION
    assert run(capsys, "solve", "--algo", "vc", files / "pair.txt")[0] == EXIT_PRECONDITION
    (files / "big.txt").write_text("grid 8 8\nP (0,0) (7,7)\n")
    assert run(capsys, "solve", "--algo", "brute", files / "big.txt")[0] == EXIT_SIZE_CAP
    assert run(capsys, "solve", files / "missing.txt")[0] == EXIT_PARSE


def test_verify(files, capsys):
    (files / "full.txt").write_text("size 3\ne 0 1\ne 0 2\ne 0 3\n")
    (files / "part.txt").write_text("size 2\ne 0 1\ne 0 2\n")
    (files / "none.txt").write_text("g 3\ne 0 1\n")
    (files / "empty.txt").write_text("size 0\n")
    assert run(capsys, "verify", files / "star.txt", files / "full.txt")[0] == 0
    code, out, _ = run(capsys, "verify", files / "star.txt", files / "part.txt")
    assert code != 0 and "violated: 1 3" in out
    assert run(capsys, "verify", files / "none.txt", files / "empty.txt")[0] == 0


def test_generate_chain(files, capsys):
    (files / "tri.mcc").write_text("mcc 3 3\nc 0 0\nc 1 1\nc 2 2\ne 0 1\ne 1 2\ne 0 2\n")
    code, out, _ = run(capsys, "generate", "mcc", files / "tri.mcc")
    assert code == 0 and "k 6" in out.splitlines()
    (files / "pts.rsa").write_text("rsa 15\np 5 0\np 5 2\np 3 4\np 7 4\n")
    code, out, _ = run(capsys, "generate", "rsa", files / "pts.rsa")
    assert code == 0 and "grid 8 5" in out and out.count("\nP 0 ") == 4
    (files / "star.mwc3").write_text("mwc3 4 2\ns 1 2 3\ne 0 1\ne 0 2\ne 0 3\n")
    assert run(capsys, "generate", "mwc3", files / "star.mwc3", "-o", files / "s.alc")[0] == 0
    assert (files / "s.alc").read_text().count("\nl ") == 15
    assert run(capsys, "generate", "alc", files / "s.alc", "-o", files / "s.txt")[0] == 0
    code, out, _ = run(capsys, "solve", files / "s.txt")
    assert report(out)["size"] == "17" and report(out)["within_budget"] == "true"
    assert run(capsys, "generate", "mcc", files / "pts.rsa")[0] == EXIT_PARSE


def test_generate_bmcc_params(files, capsys):
    (files / "b.bmcc").write_text("bmcc 1 1\nL 0 0\nR 0 1\ne 0 1\n")
    code, out, _ = run(capsys, "generate", "bmcc", files / "b.bmcc", "--alpha", 8, "--ell", 40, "--delta", 80)
    assert code == 0 and "k 1042" in out
    assert run(capsys, "generate", "bmcc", files / "b.bmcc", "--ell", 5)[0] == EXIT_PARSE


def test_random_and_bench(tmp_path, capsys):
    corpus = tmp_path / "c"
    assert run(capsys, "random", "--n", 8, "--m", 12, "--terminals", 3, "--count", 4, "--seed", 1,
               "--out", corpus)[0] == 0
    assert run(capsys, "random", "--n", 7, "--m", 10, "--pairs", 3, "--count", 3, "--seed", 2,
               "--out", corpus)[0] == 0
    assert run(capsys, "random", "--grid", "5x5", "--terminals", 3, "--count", 2, "--seed", 2,
               "--out", tmp_path / "g")[0] == 0
    assert len(list(corpus.iterdir())) == 4  # second batch overwrote the first three files
    code, out, _ = run(capsys, "bench", corpus)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    for r in rows:
        sizes = {r[f"{a}_size"] for a in ("brute", "bb", "twdp", "vc") if r[f"{a}_size"] != "n/a"}
        assert len(sizes) == 1
    code, out, _ = run(capsys, "bench", tmp_path / "g", "--timeout", 20, "-o", tmp_path / "g.csv")
    assert code == 0 and len((tmp_path / "g.csv").read_text().splitlines()) == 3


def test_bench_empty(tmp_path, capsys):
    (tmp_path / "e").mkdir()
    code, out, _ = run(capsys, "bench", tmp_path / "e")
    assert code == 0 and len(out.strip().splitlines()) == 1


def test_auto_prefers_dp_on_few_terminals(tmp_path, capsys):
    (tmp_path / "c5.txt").write_text("g 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 4 0\nP 0 2\n")
    code, out, _ = run(capsys, "solve", tmp_path / "c5.txt")
    assert code == 0 and report(out)["algo"] == "twdp" and report(out)["size"] == "2"
