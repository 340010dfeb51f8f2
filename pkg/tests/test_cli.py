import io
import json
from importlib.resources import files

import jsonschema
import pytest

from derivalg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def schema():
    return json.loads(files("derivalg").joinpath("output_schema.json").read_text())


def test_product_pinned(capsys):
    code, out, _ = run(
        capsys,
        "product", "--arity", "2", "--symmetric", "--vars", "1",
        "D[(x1 x1)]", "D[(x1 x1)]",
    )
    assert code == 0
    assert out == "2*((x1 x1) x1) d1\n"


def test_check_identity_pinned(capsys):
    code, out, _ = run(
        capsys,
        "check-identity", "--builtin", "witt1",
        "--identity", "novikov", "--range", "-1..12",
    )
    assert code == 0
    assert out == "PASS\n"


def test_quotient_pinned_json(capsys):
    code, out, _ = run(
        capsys,
        "quotient", "--arity", "2", "--symmetric", "--vars", "1",
        "--identity", "(x1 (x1 (x1 x1)))", "--degree", "5", "--json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["dimension"] == 1
    assert doc["truncation"] == 8
    jsonschema.validate(doc, schema())


def test_check_identity_failure(capsys):
    code, out, _ = run(
        capsys,
        "check-identity", "--builtin", "leibniz_der",
        "--identity", "novikov", "--range", "0..6",
    )
    assert code == 0
    assert out == "FAIL at (f0, f1, f2): defect -f3\n"


def test_check_identity_expression(capsys):
    # associator symmetry spelled out instead of named
    expr = "((x1 x2) x3) - (x1 (x2 x3)) - ((x2 x1) x3) + (x2 (x1 x3))"
    code, out, _ = run(
        capsys,
        "check-identity", "--builtin", "witt1",
        "--identity", expr, "--range", "-1..8",
    )
    assert code == 0
    assert out == "PASS\n"


def test_apply(capsys):
    code, out, _ = run(capsys, "apply", "D[(x1 x1)]", "x1")
    assert code == 0
    assert out == "(x1 x1)\n"


def test_nilpotent_absent_and_present(capsys):
    code, out, _ = run(capsys, "nilpotent", "D[(x1 x1)]", "--bound", "4")
    assert code == 0
    assert out == "absent\n"
    code, out, _ = run(
        capsys,
        "nilpotent", "D[(x1 x1)]", "--side", "right",
        "--identity", "(x1 (x1 (x1 x1)))",
    )
    assert code == 0
    assert out == "3\n"


def test_nilpotent_json_envelope(capsys):
    code, out, _ = run(
        capsys,
        "nilpotent", "D[(x1 x1)]", "--side", "right",
        "--identity", "(x1 (x1 (x1 x1)))", "--json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] == {"index": 3, "side": "right", "bound": 10}
    assert doc["command"] == "nilpotent"
    jsonschema.validate(doc, schema())


def test_jacobian_with_probe(capsys):
    code, out, _ = run(capsys, "jacobian", "D[(x1 x1)]")
    assert code == 0
    assert out == "[[2*U(x1)]]\n"
    # truncated context cannot settle the binary probe at this bound
    code, out, _ = run(
        capsys,
        "jacobian", "D[(x1 x1)]", "--probe", "8",
        "--identity", "(x1 (x1 (x1 x1)))", "--json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["nilpotency"] == "unknown"
    jsonschema.validate(doc, schema())


def test_jacobian_probe_ternary(capsys):
    code, out, _ = run(
        capsys,
        "jacobian", "--arity", "3", "D[(x1 x1 x1)]", "--probe", "6",
        "--identity", "(x1 x1 (x1 x1 x1))",
    )
    assert code == 0
    assert out.splitlines()[-1] == "nilpotency: 4"


def test_generate_word_pinned(capsys):
    code, out, _ = run(capsys, "generate", "--word", "((x1 x1) x1)")
    assert code == 0
    assert out == "((x1 x1) x1) dx = 1/2*D*D\n"


def test_generate_span(capsys):
    code, out, _ = run(capsys, "generate", "--span", "5", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["passed"] is True
    assert doc["result"]["rows"] == [
        [0, 1, 1], [1, 1, 1], [2, 1, 1], [3, 2, 2], [4, 3, 3], [5, 6, 6],
    ]
    jsonschema.validate(doc, schema())


def test_reduce(capsys):
    code, out, _ = run(
        capsys,
        "reduce", "--identity", "(x1 (x1 (x1 x1)))", "((x1 x1) ((x1 x1) x1))",
    )
    assert code == 0
    assert out == "-(((x1 x1) (x1 x1)) x1)\n"


def test_engel(capsys):
    code, out, _ = run(capsys, "engel", "--identity", "(x1 (x1 (x1 x1)))")
    assert code == 0
    assert out == "3\n"


def test_structconst(capsys):
    code, out, _ = run(capsys, "structconst", "--builtin", "witt1", "e-1", "2*e3")
    assert code == 0
    assert out == "8*e2\n"


def test_stdin_payload(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("D[(x1 x1)]"))
    code, out, _ = run(capsys, "apply", "-", "x1")
    assert code == 0
    assert out == "(x1 x1)\n"


def test_domain_error_exits_1(capsys):
    code, out, err = run(capsys, "product", "D[(x1 x2)]", "D[(x1 x1)]")
    assert code == 1
    assert out == ""
    assert err.startswith("error: ")


def test_parse_error_exits_1(capsys):
    code, _, err = run(capsys, "apply", "D[(x1 x1)]", "2*")
    assert code == 1
    assert "position" in err


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["quotient", "--degree", "5"])  # --identity is required
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_json_output_is_stable(capsys):
    argv = [
        "quotient", "--identity", "(x1 (x1 (x1 x1)))",
        "--degree", "4", "--json",
    ]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    assert first[1].encode() == second[1].encode()


def test_every_command_json_validates(capsys):
    checker = schema()
    invocations = [
        ["product", "x1 d1", "D[(x1 x1)]"],
        ["apply", "D[(x1 x1)]", "3*x1"],
        ["nilpotent", "D[(x1 x1)]"],
        ["jacobian", "D[(x1 x1)]"],
        ["generate", "--word", "(x1 x1)"],
        ["generate", "--span", "3"],
        ["quotient", "--identity", "(x1 (x1 (x1 x1)))", "--degree", "3"],
        ["reduce", "--identity", "(x1 (x1 (x1 x1)))", "(x1 (x1 (x1 x1)))"],
        ["check-identity", "--builtin", "witt1", "--identity", "jacobi"],
        ["check-identity", "--builtin", "leibniz_der", "--identity", "novikov",
         "--range", "0..4"],
        ["engel", "--identity", "(x1 (x1 (x1 x1)))"],
        ["structconst", "--builtin", "dual_leibniz_alg", "x^1", "x^2"],
    ]
    for argv in invocations:
        code = main(argv + ["--json"])
        out = capsys.readouterr().out
        assert code == 0, argv
        doc = json.loads(out)
        jsonschema.validate(doc, checker)
        assert doc["version"]
