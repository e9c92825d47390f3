#!/usr/bin/env python3
"""Run every experiment once with a representative config and write the
JSON reports to ./reports/ (or the directory given as argv[1])."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from padiclt.experiments import ExperimentConfig, emit, run  # noqa: E402

CONFIGS = {
    "j-homomorphism": dict(p=5, h=2, N=8),
    "dheq-vs-matrix": dict(p=3, h=3, N=8),
    "action-law": dict(p=5, h=2),
    "lie-weights": dict(p=5, h=3),
    "lie-bracket": dict(p=3, h=3),
    "finite-difference": dict(p=5, h=2, N=12),
    "fn-sequence": dict(p=3, h=2, Dmax=12),
    "vs-stability": dict(p=3, h=3),
    "reachability": dict(p=3, h=3),
    "kernels": dict(p=3, h=3),
    "lf-diagnostic": dict(p=3, h=3),
    "contraction": dict(p=5, h=2),
    "formal-group-axioms": dict(p=2, h=2),
    "gm-identities": dict(p=5, h=2, Dmax=12),
    "logarithm": dict(p=5, h=2),
    "height": dict(p=2, h=2),
    "level-structure": dict(p=5, h=1, e=1),
    "endomorphism-frobenius": dict(p=2, h=2),
    "period-convergence": dict(p=2, h=2, nmax=8),
    "dist-norms": dict(p=3, h=2),
}


def main() -> int:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("reports")
    outdir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name, kw in CONFIGS.items():
        report = run(ExperimentConfig(name, **kw))
        (outdir / f"{name}.json").write_bytes(emit(report, "json"))
        status = "PASS" if report.passed else "FAIL"
        print(f"{name:>24}: {status} ({len(report.checks)} checks)")
        if not report.passed:
            worst = 1
    return worst


if __name__ == "__main__":
    sys.exit(main())
