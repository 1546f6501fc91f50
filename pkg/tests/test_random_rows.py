"""Pipeline fuzz on random rows: strictly contractive and boundary-touching."""

import numpy as np
import pytest

from dbrov import CPoly, RowSchur, embed, hb_inner, kernel, make_context
from dbrov.poly import circle_grid


def _row_norm_sq(c, theta):
    z = np.exp(1j * np.asarray(theta))
    vals = np.zeros(z.shape + (c.shape[1],), dtype=complex)
    for row in c[::-1]:
        vals = vals * z[..., None] + row
    return (np.abs(vals) ** 2).sum(axis=-1)


def random_row(rng, d, q, target_sup, dense=1 << 14):
    c = rng.normal(size=(q + 1, d)) + 1j * rng.normal(size=(q + 1, d))
    thetas = 2 * np.pi * np.arange(dense) / dense
    j = int(np.argmax(_row_norm_sq(c, thetas)))
    # ternary refinement of the sup so the normalized row is truly Schur
    lo, hi = thetas[j] - 2 * np.pi / dense, thetas[j] + 2 * np.pi / dense
    for _ in range(80):
        m1, m2 = lo + (hi - lo) / 3, hi - (hi - lo) / 3
        if _row_norm_sq(c, m1) < _row_norm_sq(c, m2):
            lo = m1
        else:
            hi = m2
    sup = float(np.sqrt(_row_norm_sq(c, 0.5 * (lo + hi))))
    return RowSchur(c * (target_sup / sup))


@pytest.mark.parametrize("seed,d,q", [(1, 1, 3), (2, 2, 2), (3, 3, 5), (4, 4, 4)])
def test_strictly_contractive_rows(seed, d, q):
    rng = np.random.default_rng(seed)
    ctx = make_context(random_row(rng, d, q, 0.9))
    assert ctx.Lambda == ()
    assert ctx.reports["det_gap_sup"] <= 1e-10
    f = CPoly(rng.normal(size=8) + 1j * rng.normal(size=8))
    w = 0.6 * np.exp(1.1j)
    k = kernel(ctx, w)
    assert abs(hb_inner(ctx, embed(ctx, f), k) - f(w)) <= 1e-8 + k.tail_bound


@pytest.mark.parametrize("seed,d,q", [(11, 2, 3), (12, 3, 2)])
def test_rows_touching_the_circle(seed, d, q):
    # normalized so the sup over a dense grid is exactly 1: the defect has a
    # (numerically) double zero where the sup is attained
    rng = np.random.default_rng(seed)
    ctx = make_context(random_row(rng, d, q, 1.0))
    assert len(ctx.Lambda) >= 1
    assert ctx.reports["mate_residual_sup"] <= 1e-8
    assert ctx.reports["factor_residual_sup"] <= 1e-8
    assert ctx.reports["det_gap_sup"] <= 1e-7
    lam = ctx.Lambda[0][0]
    k = kernel(ctx, lam)
    mass_norm = hb_inner(ctx, k, k).real
    assert mass_norm > 0
