import io
import json

import pytest

from g2spider.cli import UsageError, main, read_combo, read_element
from g2spider.web import H_web, polygon, print_web, tensor


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_reduce_square(tmp_path):
    path = write(tmp_path, "sq.txt", print_web(polygon(4)) + "\n")
    code, text = run("reduce", path, "--no-cache")
    assert code == 0
    lines = [json.loads(ln) for ln in text.splitlines()]
    assert len(lines) == 4
    assert sorted(r["coeff"] for r in lines) == sorted(["-q^2 - q^-2"] * 2 + ["q^2 + 1 + q^-2"] * 2)


def test_reduce_json_document(tmp_path):
    path = write(tmp_path, "sq.txt", json.dumps({"coeff": "q", "web": print_web(polygon(4))}) + "\n")
    code, text = run("reduce", path, "--no-cache", "--format", "json")
    doc = json.loads(text)
    assert code == 0 and doc["schema"] == 1 and doc["command"] == "reduce"
    assert len(doc["terms"]) == 4


def test_reduce_empty_input(tmp_path):
    code, text = run("reduce", write(tmp_path, "e.txt", ""), "--no-cache")
    assert code == 0 and text == ""


@pytest.mark.parametrize(
    "body,n,terms",
    [("B2: s1", None, 4), ("", 3, 1), ("B2: s1 s1^-1", None, 1), ("s1 s2", 3, None)],
)
def test_eval_braid(tmp_path, body, n, terms):
    argv = ["eval-braid", write(tmp_path, "b.txt", body + "\n"), "--no-cache"]
    if n is not None:
        argv += ["--n", str(n)]
    code, text = run(*argv)
    assert code == 0
    if terms is not None:
        assert len(text.splitlines()) == terms


def test_decompose_h(tmp_path):
    code, text = run("decompose", write(tmp_path, "h.txt", print_web(H_web()) + "\n"), "--no-cache")
    assert code == 0
    words = [json.loads(ln)["word"] for ln in text.splitlines()]
    assert words and all(w.startswith("B2:") for w in words)


def test_decompose_rejects_non_endomorphism(tmp_path):
    cup = "web { bottom: 0; top: 2; vertices: 0; rot: ; edges: T1-T2 }"
    code, _ = run("decompose", write(tmp_path, "c.txt", cup + "\n"), "--no-cache")
    assert code == 2


def test_verify_suite():
    code, text = run("verify", "charpoly", "--no-cache")
    assert code == 0 and text.splitlines()[-1] == "PASS charpoly"


def test_verify_at_point_json():
    code, text = run("verify", "specialization", "--q0", "zeta8", "--format", "json", "--no-cache")
    doc = json.loads(text)
    assert code == 0 and doc["schema"] == 1 and doc["passed"]


def test_budget_exit_code(tmp_path):
    path = write(tmp_path, "p.txt", print_web(tensor(polygon(5), polygon(4))) + "\n")
    code, _ = run("reduce", path, "--no-cache", "--budget", "1")
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["reduce"],
        ["verify", "nonsense"],
        ["reduce", "/nonexistent/file"],
        ["verify", "charpoly", "--q0", "root(q^2-1)"],
        ["reduce", "-", "--budget", "0"],
        ["reduce", "-", "--cache", "x", "--no-cache"],
    ],
)
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_bad_input_lines_are_usage_errors():
    with pytest.raises(UsageError):
        read_combo("web { nonsense }")
    with pytest.raises(UsageError):
        read_element("s1", None)
    with pytest.raises(UsageError):
        read_element("B2: s1\nB3: s1", None)


def test_cache_file_is_written_and_reused(tmp_path):
    cache = str(tmp_path / "cache.jsonl")
    path = write(tmp_path, "sq.txt", print_web(polygon(5)) + "\n")
    first = run("reduce", path, "--cache", cache)
    assert (tmp_path / "cache.jsonl").exists()
    assert run("reduce", path, "--cache", cache) == first


def test_cache_from_environment(tmp_path, monkeypatch):
    cache = tmp_path / "env.jsonl"
    monkeypatch.setenv("G2SPIDER_CACHE", str(cache))
    code, _ = run("reduce", write(tmp_path, "sq.txt", print_web(polygon(4)) + "\n"))
    assert code == 0 and cache.exists()
