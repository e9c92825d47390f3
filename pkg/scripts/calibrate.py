#!/usr/bin/env python3
"""Pre-build calibration: resolve the j composition order and measure the
contraction / finite-difference rates before they are frozen into tests.

Run from the repository root:  python3 scripts/calibrate.py
"""

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from padiclt.padics import make_context  # noqa: E402
from padiclt.divalg import div_mul, j_embed, mat_eq, mat_mul, sample_gamma  # noqa: E402


def j_order_oracle() -> None:
    print("== j composition order oracle ==")
    for (p, h) in [(5, 2), (3, 3)]:
        ctx = make_context(p, h, 8)
        rng = random.Random(20)
        left_ok = right_ok = 0
        trials = 20
        for _ in range(trials):
            a = sample_gamma(ctx, 0, rng)
            b = sample_gamma(ctx, 0, rng)
            jab = j_embed(div_mul(a, b))
            if mat_eq(jab, mat_mul(j_embed(a), j_embed(b))):
                left_ok += 1
            if mat_eq(jab, mat_mul(j_embed(b), j_embed(a))):
                right_ok += 1
        print(f"  p={p} h={h}: j(ab)=j(a)j(b) holds {left_ok}/{trials}, "
              f"j(ab)=j(b)j(a) holds {right_ok}/{trials}")


def contraction_measurement() -> None:
    from padiclt.domain import DomainFunc, Section, gamma_act, random_domain_func

    print("== Gamma_n contraction slope on ||.||_D (units of v(p)/h) ==")
    for h, p in [(2, 5), (3, 3)]:
        ctx = make_context(p, h, 8)
        for n in (1, 2, 3):
            rng = random.Random(100 * h + n)
            profiles = []
            for _ in range(40):
                g = sample_gamma(ctx, n, rng)
                f = random_domain_func(ctx, h, dmax=4, rng=rng)
                x = Section(f, 0)
                y = gamma_act(g, x, 4)
                diff = y.func.sub(x.func)
                if diff.is_zero_at_precision():
                    continue
                profiles.append(diff.gauss_valuation() - f.gauss_valuation())
            lo = min(profiles)
            print(f"  h={h} p={p} n={n}: min profile {lo} (bound n*h = {n * h}), "
                  f"measured over {len(profiles)} samples")


def finite_difference_rate() -> None:
    from padiclt.domain import (
        DomainFunc, Section, lie_finite_difference, random_domain_func,
    )
    from padiclt.divalg import sample_obh

    print("== finite-difference defect growth per k step (units of v(p)/h) ==")
    h, p, N = 2, 5, 12
    ctx = make_context(p, h, N)
    rng = random.Random(7)
    steps = []
    for _ in range(10):
        delta = sample_obh(ctx, rng)
        f = random_domain_func(ctx, h, dmax=4, rng=rng)
        # generous degree budget keeps truncation noise below the signal
        x = Section(DomainFunc(ctx, h, 30, dict(f.terms)), 1)
        defects = []
        for k in (2, 3, 4, 5):
            quot, dx = lie_finite_difference(delta, x, k)
            err = quot.sub(dx)
            defects.append(None if err.is_zero_at_precision()
                           else err.func.gauss_valuation())
        print(f"  defect valuations by k=2..5: {defects}")
        for a, b in zip(defects, defects[1:]):
            if a is not None and b is not None:
                steps.append(b - a)
    if steps:
        print(f"  min step {min(steps)}, max step {max(steps)} (h = {h})")


if __name__ == "__main__":
    j_order_oracle()
    try:
        contraction_measurement()
        finite_difference_rate()
    except ImportError as exc:
        print(f"(domain module not built yet: {exc})")
