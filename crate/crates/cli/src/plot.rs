//! Matplotlib scripts that read one result CSV each.

use std::fs;
use std::path::{Path, PathBuf};

use crate::CliError;

struct PlotSpec {
    csv: &'static str,
    script: &'static str,
    body: &'static str,
}

const PREAMBLE: &str = r#"import csv
import os
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def load(name):
    with open(os.path.join(HERE, name), newline="") as fh:
        return list(csv.DictReader(fh))


def by_q(rows, x, y):
    groups = defaultdict(list)
    for r in rows:
        groups[int(r["q"])].append((float(r[x]), float(r[y])))
    return {q: sorted(v) for q, v in sorted(groups.items())}

"#;

const SPECS: [PlotSpec; 4] = [
    PlotSpec {
        csv: "sumprod.csv",
        script: "plot_sumprod.py",
        body: r#"rows = load("sumprod.csv")
fig, ax = plt.subplots()
for q, pts in by_q(rows, "n", "minMax").items():
    xs, ys = zip(*pts)
    ax.loglog(xs, ys, "o-", base=2, label=f"q={q}")
ns = sorted({float(r["n"]) for r in rows})
ax.loglog(ns, ns, "k:", base=2, label="|A|")
ax.set_xlabel("n = |A|")
ax.set_ylabel("min max(|A+A|, |A.A|)")
ax.legend()
out = os.path.join(HERE, "sumprod.png")
fig.savefig(out, dpi=120)
print(out)
"#,
    },
    PlotSpec {
        csv: "distance.csv",
        script: "plot_distance.py",
        body: r#"rows = load("distance.csv")
fig, ax = plt.subplots()
for q, pts in by_q(rows, "N", "minDelta").items():
    xs, ys = zip(*pts)
    ax.loglog(xs, ys, "o-", base=2, label=f"q={q}")
ax.set_xlabel("N = |P|")
ax.set_ylabel("min |Delta(P)|")
ax.legend()
out = os.path.join(HERE, "distance.png")
fig.savefig(out, dpi=120)
print(out)
"#,
    },
    PlotSpec {
        csv: "incidence.csv",
        script: "plot_incidence.py",
        body: r#"rows = load("incidence.csv")
fig, ax = plt.subplots()
for q, pts in by_q(rows, "N", "maxI").items():
    xs, ys = zip(*pts)
    ax.loglog(xs, ys, "o-", base=2, label=f"q={q}")
ns = sorted({float(r["N"]) for r in rows})
ax.loglog(ns, [n ** 1.5 for n in ns], "k:", base=2, label="N^1.5")
ax.set_xlabel("N = |P| = |L|")
ax.set_ylabel("max incidences")
ax.legend()
out = os.path.join(HERE, "incidence.png")
fig.savefig(out, dpi=120)
print(out)
"#,
    },
    PlotSpec {
        csv: "kakeya.csv",
        script: "plot_kakeya.py",
        body: r#"rows = sorted(load("kakeya.csv"), key=lambda r: int(r["q"]))
qs = [int(r["q"]) for r in rows]
fig, ax = plt.subplots()
ax.loglog(qs, [int(r["minSize"]) for r in rows], "o-", label="smallest union found")
ax.loglog(qs, [float(r["qPow52"]) for r in rows], "k:", label="q^2.5")
ax.loglog(qs, [int(r["csLowerBound"]) for r in rows], "g--", label="counting lower bound")
ax.loglog(qs, [q ** 3 for q in qs], "r:", label="q^3")
ax.set_xlabel("q")
ax.set_ylabel("|union of lines|")
ax.legend()
out = os.path.join(HERE, "kakeya.png")
fig.savefig(out, dpi=120)
print(out)
"#,
    },
];

/// Writes one script per result CSV found in `dir`, next to the CSV.
pub fn emit_plots(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    for spec in &SPECS {
        if !dir.join(spec.csv).is_file() {
            continue;
        }
        let path = dir.join(spec.script);
        let text = format!("{PREAMBLE}\n{}", spec.body);
        fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    if written.is_empty() {
        return Err(CliError::MissingResults(dir.to_path_buf()));
    }
    Ok(written)
}
