import json

import pytest

from excheck import SetFamily, SetFunction
from excheck.cli import main
from excheck.fileio import save_set_family, save_set_function


@pytest.fixture()
def files(tmp_path, rank2, wmat, comp):
    paths = {}
    for name, f in (("rank2", rank2), ("wmat", wmat), ("comp", comp)):
        p = tmp_path / f"{name}.json"
        save_set_function(f, p)
        paths[name] = str(p)
    fam = tmp_path / "family.json"
    save_set_family(SetFamily(2, frozenset({0, 0b11})), fam)
    paths["family"] = str(fam)
    paths["dir"] = tmp_path
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_pass(files, capsys):
    code, out, _ = run(capsys, "check", files["rank2"], "--property", "mnat-exc", "--no-timing")
    assert code == 0 and "pass" in out


def test_check_local_failure_witness(files, capsys):
    code, out, _ = run(
        capsys, "check", files["comp"], "--property", "local", "--format", "json", "--no-timing"
    )
    assert code == 2
    report = json.loads(out)
    assert report["verdict"] == "fail"
    w = report["witness"]
    assert w["condition"] == "local:i" and w["X"] == [] and w["i"] == 1 and w["j"] == 2


def test_check_human_names_family(files, capsys):
    code, out, _ = run(capsys, "check", files["comp"], "--property", "local", "--no-timing")
    assert code == 2 and "family (i)" in out


def test_check_empty_domain_is_input_error(tmp_path, capsys):
    bad = tmp_path / "empty.json"
    bad.write_text(json.dumps({"kind": "set_function", "n": 2, "entries": []}))
    code, _, err = run(capsys, "check", str(bad), "--property", "mnat-exc")
    assert code == 1 and "error" in err


def test_check_kind_mismatch(files, capsys):
    code, _, err = run(capsys, "check", files["family"], "--property", "mnat-exc")
    assert code == 1
    code, _, err = run(capsys, "check", files["rank2"], "--property", "bnat-exc")
    assert code == 1


def test_check_family_generalized_matroid_note(files, tmp_path, capsys, k4):
    p = tmp_path / "k4fam.json"
    save_set_family(k4.bases(), p)
    code, out, _ = run(capsys, "check", str(p), "--property", "bnat-exc", "--no-timing")
    assert code == 0 and "generalized matroid" in out

    code, out, _ = run(capsys, "check", files["family"], "--property", "bnat-exc", "--no-timing")
    assert code == 2


def test_exchange_found(files, capsys):
    code, out, _ = run(
        capsys, "exchange", files["rank2"], "--x", "1,2", "--y", "3", "--i", "1,2",
        "--format", "json", "--no-timing",
    )
    assert code == 0
    report = json.loads(out)
    assert report["J"] == [3] and report["lhs"] == 3 and report["rhs"] == 3

    code, out, _ = run(
        capsys, "exchange", files["wmat"], "--x", "1,2", "--y", "2,3", "--i", "1",
        "--format", "json", "--no-timing",
    )
    assert code == 0
    report = json.loads(out)
    assert report["J"] == [3] and report["size_I"] == report["size_J"] == 1


def test_exchange_not_found(files, capsys):
    code, out, _ = run(
        capsys, "exchange", files["comp"], "--x", "1,2", "--y", "", "--i", "1",
        "--format", "json", "--no-timing",
    )
    assert code == 2
    report = json.loads(out)
    assert report["found"] is False and report["lhs"] == 3 and report["best_rhs"] == 2


def test_exchange_precondition_error(files, capsys):
    code, _, err = run(capsys, "exchange", files["wmat"], "--x", "1", "--y", "2,3")
    assert code == 1 and "effective domain" in err


def test_witness_round_trip(files, capsys):
    # feed the failing check witness back through the exchange command
    code, out, _ = run(
        capsys, "check", files["comp"], "--property", "mnat-exc-m",
        "--format", "json", "--no-timing",
    )
    assert code == 2
    w = json.loads(out)["witness"]
    code, out, _ = run(
        capsys, "exchange", files["comp"],
        "--x", ",".join(map(str, w["X"])),
        "--y", ",".join(map(str, w["Y"])),
        "--i", ",".join(map(str, w["I"])),
        "--format", "json", "--no-timing",
    )
    assert code == 2
    replay = json.loads(out)
    assert replay["lhs"] == w["lhs"] and replay["best_rhs"] == w["rhs"]


def test_duality_report(files, capsys):
    code, out, _ = run(
        capsys, "duality", files["rank2"], "--x", "1,2", "--y", "3", "--i", "1",
        "--format", "json", "--no-timing",
    )
    assert code == 0
    report = json.loads(out)
    assert report["primal"] == 3 and report["dual"] == 3 and report["gap"] == 0
    assert report["q_star"] == {"3": 1}


def test_duality_gap_exit_code(tmp_path, capsys):
    f = SetFunction.from_entries(
        4,
        [
            (0b0011, -10), (0b1100, 0), (0, 0), (0b0100, -10), (0b1000, -10),
            (0b0111, 0), (0b1011, 0), (0b1111, -10),
        ],
    )
    p = tmp_path / "gapped.json"
    save_set_function(f, p)
    code, out, _ = run(
        capsys, "duality", str(p), "--x", "1,2", "--y", "3,4", "--i", "1,2",
        "--format", "json", "--no-timing",
    )
    assert code == 2
    report = json.loads(out)
    assert report["gap"] == 10 and report["q_star"] is None
    assert "box_radius" in report


def test_demand_output(files, capsys):
    code, out, _ = run(
        capsys, "demand", files["comp"], "--price", "3/2,3/2", "--format", "json", "--no-timing"
    )
    assert code == 0
    report = json.loads(out)
    assert report["members"] == [[], [1, 2]]
    assert report["price"] == ["3/2", "3/2"]


def test_demand_rejects_decimals(files, capsys):
    code, _, err = run(capsys, "demand", files["comp"], "--price", "1.5,1.5")
    assert code == 1 and "rational" in err


def test_equivalence_pass_and_fail(files, capsys):
    code, out, _ = run(
        capsys, "equivalence", files["rank2"], "--count", "30",
        "--format", "json", "--no-timing",
    )
    assert code == 0
    report = json.loads(out)
    assert report["verdict"] == "pass"
    assert set(report["exact"]) == {"mnat-exc", "mnat-exc-m", "local"}
    assert set(report["sampled"]) == {"gs", "si", "nc", "ncsim"}

    code, out, _ = run(
        capsys, "equivalence", files["comp"], "--count", "100",
        "--format", "json", "--no-timing",
    )
    assert code == 2
    report = json.loads(out)
    assert all(v["status"] == "fail" for v in report["exact"].values())


def test_gen_uniform_writes_wmat(files, tmp_path, capsys):
    out_path = tmp_path / "gen.json"
    code, _, _ = run(
        capsys, "gen", "--kind", "uniform", "--k", "2", "--n", "3",
        "--weights", "0,1,2", "-o", str(out_path), "--no-timing",
    )
    assert code == 0
    assert json.loads(out_path.read_text()) == json.loads(
        (files["dir"] / "wmat.json").read_text()
    )


def test_gen_family_and_rank(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "--kind", "uniform", "--k", "2", "--n", "3", "--family")
    assert code == 0
    obj = json.loads(out)
    assert obj["kind"] == "set_family" and obj["members"] == [[1, 2], [1, 3], [2, 3]]

    code, out, _ = run(capsys, "gen", "--kind", "graphic", "--edges", "1-2,2-3,1-3", "--rank")
    assert code == 0
    obj = json.loads(out)
    assert obj["kind"] == "set_function" and obj["n"] == 3


def test_gen_modular_concave(capsys):
    code, out, _ = run(
        capsys, "gen", "--kind", "modular-concave", "--w", "0,0,0", "--g", "0,1,2,2"
    )
    assert code == 0
    obj = json.loads(out)
    values = {tuple(e["set"]): e["value"] for e in obj["entries"]}
    assert values[(1, 2, 3)] == 2


def test_gen_usage_error(capsys):
    code, _, err = run(capsys, "gen", "--kind", "uniform", "--n", "3")
    assert code == 1


def test_json_reports_are_byte_identical(files, capsys):
    args = (
        "check", files["comp"], "--property", "local", "--format", "json", "--no-timing"
    )
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2


def test_threads_flag_keeps_output(files, capsys):
    base = ("check", files["comp"], "--property", "mnat-exc", "--format", "json", "--no-timing")
    _, out1, _ = run(capsys, *base, "--threads", "1")
    _, out4, _ = run(capsys, *base, "--threads", "4")
    assert out1 == out4


def test_threads_env_override(files, capsys, monkeypatch):
    monkeypatch.setenv("EXCHECK_THREADS", "3")
    code, out, _ = run(
        capsys, "check", files["rank2"], "--property", "mnat-exc",
        "--format", "json", "--no-timing",
    )
    assert code == 0


def test_size_cap_and_force(tmp_path, capsys):
    fam = SetFamily(15, frozenset({0b1, 0b10}))
    p = tmp_path / "wide.json"
    save_set_family(fam, p)
    code, _, err = run(capsys, "check", str(p), "--property", "bnat-exc")
    assert code == 1 and "--force" in err
    code, _, _ = run(capsys, "check", str(p), "--property", "bnat-exc", "--no-timing", "--force")
    assert code == 0


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check"])  # missing file and property
    assert exc.value.code == 1


def test_timing_present_by_default(files, capsys):
    code, out, _ = run(capsys, "check", files["rank2"], "--property", "mnat-exc",
                       "--format", "json")
    assert code == 0 and "elapsed_ms" in json.loads(out)
