import json
import math
from pathlib import Path

import pytest

from oracles import J01
from robinspec.cli import RunConfig, convergence, main, run
from robinspec.errors import ConfigError, DomainError

GOLDEN = Path(__file__).parent / "golden" / "reports_small.json"
GOLDEN_CONFIG = {"domain_specs": ["square"], "betas": [1.0], "h": 0.1,
                 "checks": ["eq12.6", "eq1.30.1", "prop2.4"]}


def write_config(tmp_path, **data):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    return path


@pytest.mark.parametrize("bad", [
    {"domain_specs": ["square"], "betas": [1.0], "colour": 1},
    {"domain_specs": ["square"]},
    {"domain_specs": ["square"], "betas": []},
    {"domain_specs": ["square"], "betas": [-1.0]},
    {"domain_specs": ["square"], "betas": ["neumann"]},
    {"domain_specs": ["square"], "betas": [1.0], "h": 0},
    {"domain_specs": ["square"], "betas": [1.0], "p": 3, "q": 2},
    {"domain_specs": ["square"], "betas": [1.0], "checks": ["thm9.9"]},
    {"domain_specs": ["hexagon"], "betas": [1.0]},
])
def test_config_validation(bad):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(bad)


def test_dirichlet_beta_accepted():
    cfg = RunConfig.from_dict({"domain_specs": ["square"], "betas": ["dirichlet", 2]})
    assert cfg.beta_values == [math.inf, 2.0]


def test_empty_checks(tmp_path):
    res = run(RunConfig(domain_specs=["square"], betas=[1.0]), out_dir=tmp_path)
    assert res.exit_status == 0 and res.reports == []
    assert json.loads((tmp_path / "reports.json").read_text()) == []
    assert (tmp_path / "sweep.csv").exists() and (tmp_path / "profiles").is_dir()


def test_single_faber_krahn_record(tmp_path):
    cfg = RunConfig(domain_specs=["disk"], betas=[1.0], h=0.05, m=128, checks=["eq12.6"])
    res = run(cfg, out_dir=tmp_path)
    data = json.loads((tmp_path / "reports.json").read_text())
    assert len(data) == 1
    assert data[0]["claim_id"] == "eq12.6" and data[0]["holds"] is True
    assert res.exit_status == 0


def test_dirichlet_skips_finite_only_checks(tmp_path):
    cfg = RunConfig(domain_specs=["square"], betas=["dirichlet"], h=0.1,
                    checks=["eq12.6", "thm1.6", "lemmaA.2"])
    res = run(cfg, out_dir=tmp_path)
    assert [r.claim_id for r in res.reports] == ["eq12.6"]
    assert res.reports[0].context["beta"] == math.inf
    assert '"beta": "dirichlet"' in (tmp_path / "reports.json").read_text()


def test_convexity_refusal_is_skipped_not_failed(tmp_path):
    cfg = RunConfig(domain_specs=["lshape"], betas=[1.0], h=0.1, checks=["eq1.8.1"])
    res = run(cfg, out_dir=tmp_path)
    assert res.reports == [] and res.exit_status == 0


def test_outputs_do_not_depend_on_jobs(tmp_path):
    cfg = RunConfig(domain_specs=["square", "rectangle(1,2)"], betas=[0.5, 2.0], h=0.1,
                    checks=["eq12.6", "thm1.1", "thm3.1", "prop2.8", "eq12.8", "prop2.3"])
    a, b = tmp_path / "a", tmp_path / "b"
    run(cfg, out_dir=a, jobs=1)
    run(cfg, out_dir=b, jobs=2)
    for name in ("reports.json", "reports.csv", "sweep.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    profiles = sorted(p.name for p in (a / "profiles").iterdir())
    assert "square_beta_0.5_psi.csv" in profiles
    for name in profiles:
        assert (a / "profiles" / name).read_bytes() == (b / "profiles" / name).read_bytes()
        assert (a / "profiles" / name).read_text().startswith("s,value\n")


def _close(x, y):
    if isinstance(x, dict):
        return x.keys() == y.keys() and all(_close(x[k], y[k]) for k in x)
    if isinstance(x, list):
        return len(x) == len(y) and all(_close(u, v) for u, v in zip(x, y))
    if isinstance(x, float) and isinstance(y, (int, float)) and not isinstance(y, bool):
        return math.isclose(x, y, rel_tol=1e-8, abs_tol=1e-12)
    return x == y


def test_golden_reports(tmp_path):
    run(RunConfig.from_dict(GOLDEN_CONFIG), out_dir=tmp_path)
    current = json.loads((tmp_path / "reports.json").read_text())
    golden = json.loads(GOLDEN.read_text())
    assert [r["claim_id"] for r in current] == [r["claim_id"] for r in golden]
    assert _close(current, golden)


def test_convergence_dirichlet_disk():
    table = convergence("disk(m=512)", math.inf, [0.08, 0.04, 0.02])
    assert 1.8 <= table.order1 <= 2.2
    exact = J01 ** 2
    assert abs(table.lambda1[-1] - exact) < 5e-3 * exact
    assert abs(table.lambda1_extrapolated - exact) < abs(table.lambda1[-1] - exact)


def test_convergence_neumann_square():
    table = convergence("square", 0.0, [0.2, 0.1, 0.05])
    assert all(abs(x) < 1e-8 for x in table.lambda1)
    with pytest.raises(DomainError):
        convergence("square", 0.0, [0.1, 0.2, 0.05])


def test_main_subcommands(tmp_path, capsys):
    assert main(["ball", "--beta", "dirichlet"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["eigenvalue"] == pytest.approx(J01 ** 2, rel=1e-12)
    assert out["beta"] == "dirichlet"

    assert main(["domain", "square", "--beta", "1", "--h", "0.1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["lambda1"] < out["lambda2"] and "radii" in out

    csv_path = tmp_path / "prof.csv"
    assert main(["rearrange", "square", "--h", "0.1", "--out", str(csv_path)]) == 0
    assert csv_path.read_text().startswith("s,value\n")

    cfg = write_config(tmp_path, domain_specs=["square"], betas=[1.0], h=0.1, checks=["eq12.6"])
    assert main(["verify", "--config", str(cfg), "--out", str(tmp_path / "v")]) == 0
    assert (tmp_path / "v" / "reports.json").exists()

    assert main(["sweep", "--domains", "square", "--betas", "1", "--h", "0.1",
                 "--out", str(tmp_path / "s")]) == 0
    assert capsys.readouterr().out.startswith("domain,beta,h,ratio")

    bad = write_config(tmp_path, domain_specs=["square"], betas=[1.0], typo=1)
    assert main(["verify", "--config", str(bad)]) == 2
    assert "unknown config keys" in capsys.readouterr().err
