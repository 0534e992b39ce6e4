"""A small verification run through the batch front end, then a look at the margins."""

import json
import tempfile
from pathlib import Path

from robinspec.cli import RunConfig, run

cfg = RunConfig(domain_specs=["disk", "square", "rectangle(1,3)", "lshape"],
                betas=[0.5, 5.0, "dirichlet"], h=0.04, m=256,
                checks=["eq12.6", "thm1.1", "eq1.8.1", "thm1.6", "lemmaA.2", "eq4.1", "eq12.8"])
with tempfile.TemporaryDirectory() as tmp:
    result = run(cfg, out_dir=tmp, jobs=2)
    records = json.loads((Path(tmp) / "reports.json").read_text())

print(f"{len(records)} reports, exit status {result.exit_status}")
for r in records:
    c = r["context"]
    tag = "conjecture" if c.get("conjecture") else ("ok" if r["holds"] else "FAIL")
    print(f"{r['claim_id']:>9} {c['domain']:>16} beta={str(c['beta']):>9} "
          f"margin={r['margin']:+.3e} slack={r['discretization_slack']:.1e} {tag}")
