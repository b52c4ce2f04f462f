import json

from kleinlat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_build_and_dim(tmp_path, capsys):
    path = tmp_path / "t.json"
    code, _ = run(capsys, "build-tube", "--tube", "special:1", "--j", "1", "--m", "2", "-o", str(path))
    assert code == 0
    code, out = run(capsys, "dim", "-m", str(path))
    assert code == 0
    assert json.loads(out) == [2, 1, 1, 1, 1]


def test_cohomology_text(tmp_path, capsys):
    path = tmp_path / "t.json"
    run(capsys, "build-tube", "--tube", "hom:t^2+t+1", "--m", "1", "-o", str(path))
    code, out = run(capsys, "--format", "text", "cohomology", "-m", str(path), "-n", "2")
    assert code == 0
    assert out.strip() == "2,2"


def test_phi_lattice_roundtrip(tmp_path, capsys):
    t = tmp_path / "t.json"
    r = tmp_path / "r.json"
    t2 = tmp_path / "t2.json"
    run(capsys, "build-tube", "--tube", "special:0", "--j", "2", "--m", "1", "-o", str(t))
    assert run(capsys, "phi", "-m", str(t), "-o", str(r))[0] == 0
    assert run(capsys, "lattice-of", "-r", str(r), "-o", str(t2))[0] == 0
    a = json.loads(t.read_text())
    b = json.loads(t2.read_text())
    assert a["rank"] == b["rank"]


def test_xi_and_endring_exit_codes(capsys):
    code, out = run(capsys, "xi-verify", "--tube", "special:1", "--j", "1", "--m", "1", "--degrees", "1..2")
    assert code == 0
    assert json.loads(out)["xi_iso"] == {"1": True, "2": True}
    code, _ = run(capsys, "endring-check", "--tube", "hom:t^2+t+1", "--m", "1")
    assert code == 0


def test_s3_and_canonical(capsys):
    code, out = run(capsys, "s3", "--which", "t3", "--poly", "t^3+t+1")
    assert code == 0
    assert json.loads(out)["image"] == "t^3+t^2+1"
    code, out = run(capsys, "canonical", "--summands", "special:1:1:2", "--coords", "1")
    assert code == 0
    data = json.loads(out)
    assert data["positions"] == [1]


def test_classify_command(capsys):
    code, out = run(
        capsys,
        "classify",
        "--summands1", "special:1:1:2", "--coords1", "1",
        "--summands2", "special:1:1:2", "--coords2", "1",
    )
    assert code == 0
    assert json.loads(out)["isomorphic"] is True


def test_usage_errors(capsys, tmp_path):
    code, _ = run(capsys, "build-tube", "--tube", "special:1")
    assert code == 2
    code, _ = run(capsys, "dim", "-m", str(tmp_path / "missing.json"))
    assert code == 2
    code, _ = run(capsys, "canonical", "--summands", "special:1:1:2", "--coords", "1,1,1")
    assert code == 2


def test_deterministic_output(capsys, tmp_path):
    args = ["canonical", "--summands", "hom:t^2+t+1:2", "--coords", "1,0,1,1"]
    _, out1 = run(capsys, *args)
    _, out2 = run(capsys, *args)
    assert out1 == out2
