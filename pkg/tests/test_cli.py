from steenrodz.cli import main
from steenrodz.modules import parse_bruner, sample_module_z, write_bruner

Z_BITS = "0000111000000000000000"


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_validate(capsys, tmp_path):
    rc, out, _ = run(capsys, "validate", "Z")
    assert rc == 0 and "0 violations" in out
    lines = write_bruner(sample_module_z()).splitlines()
    lines.remove("0 1 1 1")
    bad = tmp_path / "bad.mod"
    bad.write_text("\n".join(lines) + "\n")
    rc, out, _ = run(capsys, "validate", str(bad))
    assert rc == 1


def test_missing_file(capsys, tmp_path):
    rc, _, err = run(capsys, "validate", str(tmp_path / "nope"))
    assert rc == 2 and "error" in err


def test_ext_outputs(capsys, tmp_path):
    tsv, svg = tmp_path / "z.tsv", tmp_path / "z.svg"
    rc, _, _ = run(capsys, "ext", "Z", "--s-max", "4", "--t-max", "16", "-o", str(tsv), "--svg", str(svg))
    assert rc == 0
    assert tsv.read_text().startswith("s\tt\tdim\n0\t0\t1\n")
    assert svg.exists()
    other = tmp_path / "other.svg"
    assert run(capsys, "ext", "Z", "--s-max", "2", "--t-max", "8", "--svg", str(other))[0] == 0
    assert other.with_suffix(".tsv").read_text().startswith("s\tt\tn\tdim\tlabel\tkilled\n")
    rc, out, _ = run(capsys, "ext", "Z", "--self", "--s-max", "2", "--t-max", "1", "--t-min", "0")
    assert rc == 0 and "2\t1\t2" in out


def test_module_operations(capsys, tmp_path):
    d = tmp_path / "dz.mod"
    assert run(capsys, "dual", "Z", "-o", str(d))[0] == 0
    back = tmp_path / "z.mod"
    assert run(capsys, "dual", str(d), "-o", str(back))[0] == 0
    assert parse_bruner(back.read_text()) == sample_module_z()
    rc, out, _ = run(capsys, "suspend", "Z", "--by", "3")
    assert rc == 0 and parse_bruner(out).bottom == 3
    rc, out, _ = run(capsys, "tensor", "Z", str(d))
    assert rc == 0 and parse_bruner(out).dim == 1024


def test_eq2_and_bg(capsys, tmp_path):
    rc, out, _ = run(capsys, "bg", "1", "-o", str(tmp_path / "n1.mod"))
    assert rc == 0
    rc, out, _ = run(capsys, "eq2", str(tmp_path / "n1.mod"), "--profile", "A(2)", "--ext", "2")
    assert rc == 0 and out.splitlines()[0] == "E(Q2) + S^4F2 + S^6F2"
    assert run(capsys, "bg", "9")[0] == 2


def test_algtmf(capsys, tmp_path):
    out = tmp_path / "e1.tsv"
    rc, _, _ = run(capsys, "algtmf", "--max-stem", "25", "-o", str(out), "--svg", str(tmp_path / "e1.svg"))
    assert rc == 0
    text = out.read_text()
    assert "2\t24\t2\t1\th_{2,2}^2\t1" in text and "3\t24\t3\t1\th_3^3\t1" in text


def test_algtmf_range(capsys, tmp_path):
    rc, _, err = run(capsys, "algtmf", "--max-stem", "40", "-o", str(tmp_path / "e1.tsv"))
    assert rc == 2 and "--max-stem 37" in err
    rc, _, _ = run(capsys, "algtmf", "--self", "-o", str(tmp_path / "self.tsv"))
    assert rc == 0 and (tmp_path / "self.tsv").read_text()


def test_roth_build(capsys, tmp_path):
    a2, b2 = tmp_path / "a2.mod", tmp_path / "b2.mod"
    rc, _, _ = run(capsys, "roth", "build", "--bits", Z_BITS, "-o", str(a2), "--b2", str(b2))
    assert rc == 0
    assert b2.read_text() == write_bruner(sample_module_z())
    assert parse_bruner(a2.read_text()).dim == 64
    rc, _, err = run(capsys, "roth", "build", "--bits", "0" * 22, "-o", str(a2))
    assert rc == 1 and "fails the criterion" in err
    assert run(capsys, "roth", "build", "--bits", "0" * 18, "-o", str(a2))[0] == 2


def test_roth_count(capsys):
    rc, out, _ = run(capsys, "roth", "count", "--workers", "2")
    assert rc == 0 and out.strip() == "1600"


def test_toda_and_uniq(capsys):
    rc, out, _ = run(capsys, "toda", "check", "--module", "Z")
    assert rc == 0 and "criterion 1: holds" in out and "criterion 2: holds" in out
    rc, out, _ = run(capsys, "uniq-count", "--module", "Z")
    assert rc == 0 and out.strip() == "4"


def test_chart_command(capsys, tmp_path):
    src = tmp_path / "in.tsv"
    src.write_text("s\tt\tdim\n0\t0\t1\n1\t7\t1\n")
    out = tmp_path / "c.svg"
    assert run(capsys, "chart", str(src), "-o", str(out), "--title", "x")[0] == 0
    first = out.read_bytes()
    assert run(capsys, "chart", str(src), "-o", str(out), "--title", "x")[0] == 0
    assert out.read_bytes() == first
    src.write_text("junk\n1\n")
    assert run(capsys, "chart", str(src), "-o", str(out))[0] == 2


def test_reproduce_subset(capsys, tmp_path):
    rc, out, _ = run(capsys, "reproduce", "--only", "bruner-fixture", "brown-gitler", "--workers", "1")
    assert rc == 0
    lines = out.splitlines()
    assert lines[0].startswith("# steenrodz reproduce ") and "--only=bruner-fixture brown-gitler" in lines[0]
    assert [x.split()[0] for x in lines[1:3]] == ["[PASS]", "[PASS]"]
