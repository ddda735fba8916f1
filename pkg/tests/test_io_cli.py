import json
import random
import re
from fractions import Fraction as F

import numpy as np
import pytest

from helpers import rand_any
from wefable import io as wio
from wefable.cli import main
from wefable.errors import InstanceFormatError, UnsupportedProfile
from wefable.generators import Distribution, generate
from wefable.lpfile import export_lp, format_coefficient
from wefable.model import Additive, Allocation, Binary, IdenticalAdditive, Instance, Table

CROSSED_PAIR = Instance((1, 10), Additive([[5, 7], [10, 8]]))
HEAVY_GETS_ALL = Instance((1, F(7, 2)), IdenticalAdditive([1, 1, 1]))


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- JSON files --------------------------------------------------------------


def test_round_trip_every_profile():
    rng = random.Random(3)
    for _ in range(80):
        inst = rand_any(rng, rng.randint(1, 3), rng.randint(0, 4))
        assert wio.loads_instance(wio.dumps_instance(inst)) == inst


def test_table_masks_accept_binary_keys():
    text = json.dumps({"weights": ["1"], "valuations": {
        "type": "table", "m": 2, "bundles": [{"0": "0", "0b01": "1", "0b10": "2", "3": "5/2"}]}})
    inst = wio.loads_instance(text)
    assert inst.value(0, [0, 1]) == F(5, 2)


def test_parse_error_shows_line_and_caret():
    text = '{"weights": ["1"],\n "valuations": {"type": "additive" "matrix": [[1]]}}'
    with pytest.raises(InstanceFormatError) as exc:
        wio.loads_instance(text, "inst.json")
    msg = str(exc.value)
    assert msg.startswith("inst.json:2:")
    assert '"type": "additive"' in msg and "^" in msg


@pytest.mark.parametrize("obj, needle", [
    ({"valuations": {}}, "weights"),
    ({"weights": ["1"], "valuations": {"type": "nope"}}, "unknown valuation type"),
    ({"weights": [0.5], "valuations": {"type": "additive", "matrix": [[1]]}}, "weights[0]"),
    ({"weights": ["1"], "valuations": {"type": "additive", "matrix": [["x"]]}}, "matrix[0][0]"),
    ({"weights": ["1"], "valuations": {"type": "table", "m": 1, "bundles": [{"0": "0"}]}}, "all 2 bundles"),
    ({"weights": ["1", "1"], "valuations": {"type": "additive", "matrix": [[1]]}}, "instance"),
])
def test_format_errors(obj, needle):
    with pytest.raises(InstanceFormatError, match=re.escape(needle)):
        wio.loads_instance(json.dumps(obj))


def test_allocation_formats():
    inst = HEAVY_GETS_ALL
    for obj in [{"owners": [1, 1, 1]}, {"bundles": [[], [0, 1, 2]]}, {"counts": [0, 3]}]:
        assert wio.allocation_from_json(obj, inst) == Allocation((1, 1, 1), 2)
    with pytest.raises(InstanceFormatError):
        wio.allocation_from_json({"owners": [2]}, Instance((1, 1), Additive([[1], [1]])))
    with pytest.raises(InstanceFormatError):
        wio.allocation_from_json({}, inst)


# --- LP export -----------------------------------------------------------------


def test_coefficient_formatting():
    assert format_coefficient(F(6, 5)) == ("1.2", True)
    assert format_coefficient(F(-7)) == ("7", True)
    assert format_coefficient(F(2, 7)) == ("0.285714285714", False)


def test_lp_structure():
    text = export_lp(HEAVY_GETS_ALL)
    assert text.splitlines()[2] == "Minimize"
    assert " obj: p_0 + p_1" in text
    assert "\\ exact x_1_0 2/7" in text
    assert text.count(" wef_") == 2 and text.count(" assign_") == 3
    assert text.rstrip().endswith("End")
    with pytest.raises(UnsupportedProfile):
        export_lp(Instance((1,), Table([[0, 1]], 1)))


def parse_lp(text):
    """Tiny reader for the subset of LP syntax the exporter writes."""
    lines = [l for l in text.splitlines() if not l.startswith("\\")]
    obj = lines[lines.index("Minimize") + 1].split(":")[1].split("+")
    names = sorted({tok for tok in re.findall(r"[px]_\d+(?:_\d+)?", text)})
    idx = {v: k for k, v in enumerate(names)}
    c = np.zeros(len(names))
    for var in obj:
        c[idx[var.strip()]] = 1
    rows = []
    for l in lines[lines.index("Subject To") + 1:lines.index("Bounds")]:
        body = l.split(":", 1)[1]
        lhs, op, rhs = re.match(r"(.*) (>=|=) (\S+)$", body).groups()
        a = np.zeros(len(names))
        for sign, coef, var in re.findall(r"([+-]?)\s*([\d.]+)?\s*([px]_\d+(?:_\d+)?)", lhs):
            a[idx[var]] = (-1 if sign == "-" else 1) * float(coef or 1)
        lo = float(rhs)
        rows.append((a, lo, lo if op == "=" else np.inf))
    integrality = np.array([1 if v.startswith("x") else 0 for v in names])
    return c, rows, integrality


@pytest.mark.parametrize("inst, optimum", [
    (CROSSED_PAIR, F(6, 5)),
    (Instance((1, 2, 3), Binary([[1], [1], [0]])), F(2)),
    (HEAVY_GETS_ALL, F(6, 7)),
    (Instance((1,), Additive([[3]])), F(0)),
])
def test_lp_solves_to_oracle_value(inst, optimum):
    optimize = pytest.importorskip("scipy.optimize")
    c, rows, integrality = parse_lp(export_lp(inst))
    A = np.array([r[0] for r in rows])
    cons = optimize.LinearConstraint(A, [r[1] for r in rows], [r[2] for r in rows])
    ub = np.where(integrality == 1, 1, np.inf)
    res = optimize.milp(c, constraints=cons, integrality=integrality, bounds=optimize.Bounds(0, ub))
    assert res.success
    assert res.fun == pytest.approx(float(optimum), abs=1e-6)


# --- generators ------------------------------------------------------------


def test_generate_is_deterministic():
    d = Distribution.parse("discrete_uniform(1,100)")
    assert generate(d, 3, 4, 5, seed=11) == generate(d, 3, 4, 5, seed=11)
    assert generate(d, 3, 4, 5, seed=11) != generate(d, 3, 4, 5, seed=12)
    # a trial's instance does not depend on how many trials were drawn
    assert generate(d, 3, 4, 2, seed=11)[1] == generate(d, 3, 4, 5, seed=11)[1]


def test_bernoulli_density():
    d = Distribution.parse("bernoulli(0.5)")
    ones = [sum(map(sum, inst.valuations.matrix)) for inst in generate(d, 5, 25, 200, seed=1)]
    mean = sum(ones) / len(ones)
    # 125 fair coins per instance: sd of the mean over 200 instances is sqrt(125/4/200)
    assert abs(mean - 62.5) < 3 * (125 / 4 / 200) ** 0.5


def test_identical_uniform_shares_item_values():
    inst = generate(Distribution.parse("identical_uniform(1,2)"), 3, 6, 1, seed=2)[0]
    assert all(inst.value(0, [o]) == inst.value(i, [o]) for i in range(3) for o in range(6))
    assert {inst.value(0, [o]) for o in range(6)} <= {1, 2}


def test_distribution_parsing():
    assert str(Distribution.parse("bernoulli(0.25)")) == "bernoulli(0.25)"
    assert Distribution.parse("per_agent_uniform(5, 6)").max_value == 6
    with pytest.raises(ValueError):
        Distribution.parse("gauss(1,2)")
    with pytest.raises(ValueError):
        Distribution.parse("discrete_uniform(3)")


# --- CLI -----------------------------------------------------------------------


@pytest.fixture
def heavy_files(tmp_path):
    inst = write(tmp_path, "inst.json", wio.dumps_instance(HEAVY_GETS_ALL))
    alloc = write(tmp_path, "alloc.json", {"bundles": [[], [0, 1, 2]]})
    return inst, alloc


def test_cli_check(capsys, heavy_files, tmp_path):
    code, out, _ = run(capsys, "check", *heavy_files)
    payload = json.loads(out)
    assert code == 0 and payload["subsidies"] == ["6/7", "0"] and payload["wef_0_1"]
    inst = write(tmp_path, "crossed.json", wio.dumps_instance(CROSSED_PAIR))
    alloc = write(tmp_path, "crossed_alloc.json", {"owners": [0, 1]})
    code, out, _ = run(capsys, "check", inst, alloc)
    assert code == 1 and json.loads(out)["wefable"] is False


def test_cli_solve_formats(capsys, heavy_files):
    code, out, _ = run(capsys, "solve", heavy_files[0], "-a", "alg2", "--trace")
    payload = json.loads(out)
    assert code == 0 and payload["total_subsidy"] == "6/7" and payload["trace"]
    code, out, _ = run(capsys, "solve", heavy_files[0], "-a", "alg2", "--format", "csv")
    assert out.startswith("key,value\n") and "total_subsidy,6/7" in out
    code, out, _ = run(capsys, "solve", heavy_files[0], "-a", "alg2", "--format", "text")
    assert re.search(r"total_subsidy\s+6/7", out)


def test_cli_solve_wrong_profile_exits_2(capsys, heavy_files):
    code, _, err = run(capsys, "solve", heavy_files[0], "-a", "alg3")
    assert code == 2 and "UnsupportedProfile" in err


def test_cli_min_subsidy_and_mwef(capsys, heavy_files):
    code, out, _ = run(capsys, "min-subsidy", heavy_files[0], "--exact", "--engine", "exact")
    assert code == 0 and json.loads(out)["total"] == "6/7"
    code, out, _ = run(capsys, "mwef", *heavy_files, "--budget", "1/2")
    payload = json.loads(out)
    assert code == 0 and payload["subsidies"] == ["1/2", "0"] and payload["wef_requirement"] == "6/7"
    code, _, err = run(capsys, "mwef", *heavy_files, "--budget", "-1")
    assert code == 2 and "NegativeBudget" in err


def test_cli_min_subsidy_requires_exact(capsys, heavy_files):
    with pytest.raises(SystemExit):
        main(["min-subsidy", heavy_files[0]])


def test_cli_export_lp(capsys, heavy_files, tmp_path):
    code, out, _ = run(capsys, "export-lp", heavy_files[0])
    assert code == 0 and out == export_lp(HEAVY_GETS_ALL)
    dest = tmp_path / "m.lp"
    assert main(["export-lp", heavy_files[0], str(dest)]) == 0
    assert dest.read_text() == out


def test_cli_gen_respects_seed_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("WEF_SEED", "9")
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["gen", "-d", "discrete_uniform(1,9)", "--n", "2", "--m", "3", "--count", "2", "--out-dir", str(a)]) == 0
    assert main(["gen", "-d", "discrete_uniform(1,9)", "--n", "2", "--m", "3", "--count", "2", "--seed", "9",
                 "--out-dir", str(b)]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == ["instance_n2_m3_000.json", "instance_n2_m3_001.json"]
    for name in names:
        assert (a / name).read_text() == (b / name).read_text()
        assert wio.read_instance(a / name).weights == (1, 2)


def test_cli_bench_text(capsys):
    code, out, _ = run(capsys, "bench", "-a", "alg2", "--n", "3", "--ms", "3,6", "--trials", "3",
                       "--exact-where-feasible")
    assert code == 0
    assert "bound" in out.splitlines()[0]
    assert len(out.strip().splitlines()) >= 3


def test_cli_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "solve", str(tmp_path / "nope.json"), "-a", "alg1")
    assert code == 2 and "nope.json" in err


def test_cli_bad_json_reports_location(capsys, tmp_path):
    path = write(tmp_path, "bad.json", '{"weights": [1,}')
    code, _, err = run(capsys, "solve", path, "-a", "alg1")
    assert code == 2 and "bad.json:1:" in err
