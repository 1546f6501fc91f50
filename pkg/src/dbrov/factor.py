"""Spectral factorization of boundary defects.

The scalar defect 1 - BB* factors through its roots (Fejer-Riesz) into the
mate a; the matrix defect I - B*B is factored by a Newton-type iteration on
FFT grids into the analytic outer factor A with A(0) Hermitian positive
definite, so that det A = a exactly rather than up to a unimodular constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDeterminant,
    FactorizationDiverged,
    MateUndefined,
    NotPositive,
    OddBoundaryMultiplicity,
    RootFindingFailed,
    SingularIterate,
)
from .poly import CPoly, LaurentHerm, MatPoly, circle_grid, poly_roots, \
    pow2_at_least
from .rowschur import RowSchur, defect_laurent

# |w * conj(w')| within this of 1 treats (w, w') as a circle-reflected pair
PAIRING_TOL = 1e-6
ZERO_DEFECT_TOL = 1e-12


@dataclass(frozen=True)
class FactorReport:
    """Outcome of a factorization: the factor plus certification numbers."""

    factor: CPoly | MatPoly
    residual_sup: float
    outer_gap: float
    iterations: int


def mate(B: RowSchur, tol_psd: float = 1e-8) -> CPoly:
    """The outer polynomial a with |a|^2 = 1 - BB* on the circle, a(0) > 0."""
    return mate_report(B, tol_psd=tol_psd).factor


def mate_report(B: RowSchur, tol_psd: float = 1e-8) -> FactorReport:
    scalar, _ = defect_laurent(B)
    m = scalar.half_degree
    coeffs = scalar.coeffs
    if np.abs(coeffs).max(initial=0.0) <= ZERO_DEFECT_TOL:
        raise MateUndefined("1 - BB* vanishes identically on the circle")
    low = scalar.min_circle_eig()
    if low < -tol_psd:
        raise NotPositive(f"defect dips to {low:.3e} on the circle")

    if m == 0:
        a = CPoly([np.sqrt(coeffs[0].real)])
        return FactorReport(a, _mate_residual(B, a), outer_check(a), 0)

    # roots of z^m L(z) come in (w, 1/conj(w)) pairs; unimodular clusters
    # carry even multiplicity and are split evenly between the factors.
    # dips of size tol_psd (allowed by the precondition) split a boundary
    # double root by ~sqrt(tol_psd), so the cluster radius must cover that
    boundary_tol = max(PAIRING_TOL, 2.0 * np.sqrt(tol_psd))
    p = CPoly(coeffs)
    roots = poly_roots(p)
    selected: list[complex] = []
    boundary: list[tuple[complex, int]] = []
    for r, mult in roots:
        if abs(abs(r) ** 2 - 1.0) < boundary_tol:
            boundary.append((r, mult))
        elif abs(r) > 1.0:
            selected.extend([r] * mult)
    for center, mult in _cluster_unimodular(boundary, boundary_tol):
        if mult % 2 != 0:
            raise OddBoundaryMultiplicity(
                f"unimodular root cluster at {center} has odd multiplicity {mult}"
            )
        theta = _refine_boundary_angle(coeffs, float(np.angle(center)))
        selected.extend([np.exp(1j * theta)] * (mult // 2))
    if len(selected) != m:
        raise RootFindingFailed(
            f"defect root pairing is inconsistent: {len(selected)} factor "
            f"roots for half-degree {m}"
        )

    lead = coeffs[-1]
    amp = np.sqrt(abs(lead) / np.prod([abs(w) for w in selected]))
    a = amp * CPoly.from_roots(selected)
    a0 = a(0)
    a = (np.conj(a0) / abs(a0)) * a
    return FactorReport(a, _mate_residual(B, a), outer_check(a), 0)


def _refine_boundary_angle(laurent_coeffs: np.ndarray, theta: float) -> float:
    """Newton on the angle at a boundary minimum of the defect.

    The defect is a real trigonometric polynomial with an even-order zero at
    the cluster angle, so Newton on its derivative is quadratically exact and
    beats the sqrt(eps) scatter of a generic double root.
    """
    m = laurent_coeffs.shape[0] // 2
    ks = np.arange(-m, m + 1)
    for _ in range(3):
        e = np.exp(1j * ks * theta)
        d1 = np.sum(1j * ks * laurent_coeffs * e).real
        d2 = np.sum(-(ks ** 2) * laurent_coeffs * e).real
        if abs(d2) < 1e-14:
            break
        step = d1 / d2
        theta -= step
        if abs(step) < 1e-15:
            break
    return theta


def _cluster_unimodular(boundary, tol: float = PAIRING_TOL):
    merged: list[list] = []
    for r, mult in sorted(boundary, key=lambda t: np.angle(t[0])):
        if merged and abs(merged[-1][0] - r) < tol:
            tot = merged[-1][1] + mult
            merged[-1][0] = (merged[-1][0] * merged[-1][1] + r * mult) / tot
            merged[-1][1] = tot
        else:
            merged.append([r, mult])
    if len(merged) > 1 and abs(merged[0][0] - merged[-1][0]) < tol:
        tot = merged[0][1] + merged[-1][1]
        merged[0][0] = (merged[0][0] * merged[0][1] + merged[-1][0] * merged[-1][1]) / tot
        merged[0][1] = tot
        merged.pop()
    return [(complex(r), int(mult)) for r, mult in merged]


def _mate_residual(B: RowSchur, a: CPoly, n_grid: int = 512) -> float:
    z = circle_grid(max(n_grid, pow2_at_least(4 * max(B.degree, a.degree) + 1)))
    bb = (np.abs(B(z)) ** 2).sum(axis=-1)
    return float(np.abs(np.abs(a(z)) ** 2 + bb - 1.0).max())


def wilson_factor(phi: LaurentHerm, tol_factor: float = 1e-10,
                  max_iter: int = 500, grid_log2: int | None = None) -> MatPoly:
    """Outer matrix factor A with A(z)^*A(z) = phi(z) on the circle."""
    return wilson_report(phi, tol_factor, max_iter, grid_log2).factor


# coefficient-space polish is a dense least-squares solve; cap its size
_POLISH_MAX_UNKNOWNS = 6000


def wilson_report(phi: LaurentHerm, tol_factor: float = 1e-10,
                  max_iter: int = 500,
                  grid_log2: int | None = None) -> FactorReport:
    """Newton iteration A <- A [A^{-*} phi A^{-1} + I]_+ on an FFT grid.

    [.]_+ keeps the analytic Fourier half with the constant term halved.  The
    grid is offset by half a sample so circle zeros of the density (the
    generic case here) never coincide with grid points.  The iteration starts
    from the Cholesky factor of the grid mean of phi; the trimmed polynomial
    is then polished by a coefficient-space Gauss-Newton step, which removes
    the O(1/N) aliasing bias that grid methods suffer on boundary-degenerate
    densities.  Circle zeros of det phi open a fold direction that residuals
    cannot see below sqrt(eps); the zeros and their null vectors are detected
    from the density itself and pin that direction in the polish.  If the
    polished residual still exceeds tol_factor the grid is enlarged (strictly
    positive but nearly degenerate densities need it when the system is too
    large to polish).
    """
    m = phi.half_degree
    d = phi.dim
    n0 = (1 << grid_log2) if grid_log2 is not None \
        else max(pow2_at_least(8 * max(m, 1) + 1), 256)
    boundary_null = _boundary_nulls(phi)
    trace: list[float] = []
    best: tuple[float, MatPoly | None, int] = (np.inf, None, 0)
    iterations = 0
    n = n0
    while True:
        a_grid, its = _wilson_grid(phi, n, max_iter, tol_factor, trace)
        iterations += its
        factor = _finish(a_grid, m, d, offset=True)
        if _polish_size(m, d) <= _POLISH_MAX_UNKNOWNS:
            factor = _gauss_newton_polish(factor, phi, boundary_null)
        resid = factor_residual(factor, phi)
        if resid < best[0]:
            best = (resid, factor, iterations)
        if resid <= tol_factor:
            return FactorReport(factor, resid, outer_check(factor), iterations)
        if n >= max(1 << 16, 8 * n0) or iterations >= 4 * max_iter:
            raise FactorizationDiverged(
                f"residual {best[0]:.3e} after {iterations} iterations "
                f"(grid up to {n})",
                residual_trace=trace,
                best_factor=best[1],
                best_residual=best[0],
            )
        n *= 4


def _boundary_nulls(phi: LaurentHerm):
    """Unimodular zeros of det phi with the null directions of phi there.

    The determinant of a Hermitian PSD Laurent polynomial is a nonnegative
    trigonometric polynomial; its zeros are located from grid minima refined
    by Newton on the angle, and kept only when the refined value vanishes at
    rounding scale (nearly-degenerate but positive densities are left alone).
    """
    d = phi.dim
    dm = d * phi.half_degree
    if dm == 0:
        return []
    n = pow2_at_least(max(4 * (2 * dm) + 1, 1024))
    z = circle_grid(n)
    vals = phi(z)
    if not phi.is_matrix:
        vals = vals[:, None, None]
    dets = np.linalg.det(vals).real
    top = float(dets.max())
    if top <= 0:
        return []
    spec = np.fft.fft(dets) / n
    lau = np.zeros(2 * dm + 1, dtype=complex)
    lau[dm] = spec[0]
    for k in range(1, dm + 1):
        lau[dm + k] = spec[k]
        lau[dm - k] = spec[n - k]
    ks = np.arange(-dm, dm + 1)
    out = []
    for j in range(n):
        if not (dets[j] < dets[j - 1] and dets[j] < dets[(j + 1) % n]):
            continue
        theta = _refine_boundary_angle(lau, 2.0 * np.pi * j / n)
        value = float(np.sum(lau * np.exp(1j * ks * theta)).real)
        if value > 1e-10 * top:
            continue
        lam = np.exp(1j * theta)
        if any(abs(lam - l) < 1e-8 for l, _ in out):
            continue
        eigs, vecs = np.linalg.eigh(phi(lam) if phi.is_matrix
                                    else np.array([[phi(lam)]]))
        for i in range(d):
            if eigs[i] <= 1e-8 * max(abs(eigs).max(), 1e-300):
                out.append((complex(lam), vecs[:, i].copy()))
    return out


def _offset_grid(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)


def _wilson_grid(phi: LaurentHerm, n: int, max_iter: int, tol_factor: float,
                 trace: list[float]):
    """Run the grid iteration; returns (grid values, iterations used)."""
    d = phi.dim
    z = _offset_grid(n)
    vals = phi(z)
    if not phi.is_matrix:
        vals = vals[:, None, None]
    vals = 0.5 * (vals + np.conj(vals).transpose(0, 2, 1))
    eigs = np.linalg.eigvalsh(vals)
    if eigs.min() < -1e-8:
        raise NotPositive(f"density dips to {eigs.min():.3e} on the circle")
    if np.abs(np.linalg.det(vals)).max() < 1e-13:
        raise SingularIterate("density is identically singular on the circle")

    c0 = vals.mean(axis=0)
    c0 = 0.5 * (c0 + np.conj(c0).T)
    try:
        chol = np.linalg.cholesky(c0)
    except np.linalg.LinAlgError:
        try:
            chol = np.linalg.cholesky(c0 + 1e-12 * np.eye(d))
        except np.linalg.LinAlgError as exc:
            raise SingularIterate("mean density is not positive definite") from exc
    a_grid = np.tile(np.conj(chol).T, (n, 1, 1))

    eye = np.eye(d)
    best = (np.inf, a_grid)
    stall = 0
    for it in range(1, max_iter + 1):
        try:
            inv = np.linalg.inv(a_grid)
        except np.linalg.LinAlgError as exc:
            raise SingularIterate("singular iterate on the grid") from exc
        g = np.conj(inv).transpose(0, 2, 1) @ vals @ inv + eye
        spec = np.fft.fft(g, axis=0)
        spec[0] *= 0.5
        spec[n // 2] *= 0.5
        spec[n // 2 + 1 :] = 0.0
        # for the A*A convention the projection multiplies from the left
        # (mirror image of the classical rho rho* update)
        a_grid = np.fft.ifft(spec, axis=0) @ a_grid
        resid = float(
            np.abs(np.conj(a_grid).transpose(0, 2, 1) @ a_grid - vals).max()
        )
        trace.append(resid)
        if resid < best[0] * (1.0 - 1e-12):
            best = (resid, a_grid.copy())
            stall = 0
        else:
            stall += 1
        if resid <= max(tol_factor, 4e-16) or stall >= 25:
            break
    return best[1], it


def _finish(a_grid: np.ndarray, m: int, d: int, offset: bool) -> MatPoly:
    """Trim grid values to degree m and normalize A(0) Hermitian PD."""
    n = a_grid.shape[0]
    spec = np.fft.fft(a_grid, axis=0) / n
    if offset:
        k = np.arange(n)
        kk = np.where(k <= n // 2, k, k - n)
        spec *= np.exp(-1j * np.pi * kk / n)[:, None, None]
    coeffs = spec[: m + 1]
    return _polar_normalize(coeffs, d)


def _polar_normalize(coeffs: np.ndarray, d: int) -> MatPoly:
    a0 = coeffs[0]
    w, v = np.linalg.eigh(np.conj(a0).T @ a0)
    if w.min() <= 0:
        raise SingularIterate("constant coefficient of the factor is singular")
    h = (v * np.sqrt(w)) @ np.conj(v).T
    u = np.conj(a0 @ np.linalg.inv(h)).T
    return MatPoly(np.einsum("ij,kjl->kil", u, coeffs), dim=d)


def _polish_size(m: int, d: int) -> int:
    return 2 * (m + 1) * d * d


def _gauss_newton_polish(A: MatPoly, phi: LaurentHerm, boundary_null=None,
                         steps: int = 80) -> MatPoly:
    """Refine A in coefficient space so that (A*A)_k = phi_k exactly.

    The linearization Delta -> Delta*A + A*Delta has the constant left
    skew-Hermitian rotations as nullspace; the minimum-norm least-squares
    step ignores them and the polar normalization restores A(0) > 0 at the
    end.  Convergence is quadratic for strictly positive densities.  A zero
    of the density on the circle adds a fold direction where plain steps
    only halve geometrically; when the null directions (lam, v) of the zero
    are supplied, the linear rows A(lam) v = 0 pin that fold and restore
    machine-precision factors.
    """
    m = phi.half_degree
    d = phi.dim
    ac = np.zeros((m + 1, d, d), dtype=complex)
    na = min(A.coeffs.shape[0], m + 1)
    ac[:na] = A.coeffs.reshape(-1, d, d)[:na]
    phik = np.stack([np.atleast_2d(phi.coeff(k)) for k in range(m + 1)])
    scale = float(np.abs(phik).max())
    perm = _transpose_perm(d)
    boundary_null = boundary_null or []
    n_unknown = 2 * (m + 1) * d * d
    bs = 2 * d * d
    n_rows = (m + 1) * bs + 2 * d * len(boundary_null)
    eye = np.eye(d)
    prev_err = np.inf
    for _ in range(steps):
        rhs_blocks = []
        for k in range(m + 1):
            e = phik[k] - sum(
                np.conj(ac[j]).T @ ac[j + k] for j in range(m + 1 - k)
            )
            rhs_blocks.append(e)
        err = max(np.abs(e).max() for e in rhs_blocks)
        for lam, v in boundary_null:
            err = max(err, np.abs(_eval_coeffs(ac, lam) @ v).max())
        if err <= 1e-15 * max(scale, 1.0) or err > 0.7 * prev_err:
            break
        prev_err = err
        big = np.zeros((n_rows, n_unknown))
        rhs = np.zeros(n_rows)
        for k in range(m + 1):
            rhs[k * bs : k * bs + d * d] = rhs_blocks[k].real.ravel()
            rhs[k * bs + d * d : (k + 1) * bs] = rhs_blocks[k].imag.ravel()
            for j in range(m + 1 - k):
                # A_j^* Delta_{j+k}: complex-linear block
                c = np.kron(np.conj(ac[j]).T, eye)
                _add_block(big, k, j + k, bs, c.real, -c.imag, c.imag, c.real)
                # Delta_j^* A_{j+k}: conjugate-linear block, via transposition
                dmat = np.kron(eye, ac[j + k].T) @ perm
                _add_block(big, k, j, bs, dmat.real, dmat.imag, dmat.imag,
                           -dmat.real)
        row = (m + 1) * bs
        for lam, v in boundary_null:
            resid = -(_eval_coeffs(ac, lam) @ v)
            rhs[row : row + d] = resid.real
            rhs[row + d : row + 2 * d] = resid.imag
            for k in range(m + 1):
                blk = (lam ** k) * np.kron(eye, np.asarray(v))
                cols = slice(k * bs, k * bs + d * d)
                icols = slice(k * bs + d * d, (k + 1) * bs)
                big[row : row + d, cols] += blk.real
                big[row : row + d, icols] += -blk.imag
                big[row + d : row + 2 * d, cols] += blk.imag
                big[row + d : row + 2 * d, icols] += blk.real
            row += 2 * d
        delta, *_ = np.linalg.lstsq(big, rhs, rcond=None)
        delta = delta.reshape(m + 1, 2, d, d)
        ac = ac + delta[:, 0] + 1j * delta[:, 1]
    return _polar_normalize(ac, d)


def _eval_coeffs(coeffs: np.ndarray, z: complex) -> np.ndarray:
    out = np.zeros_like(coeffs[0])
    for mat in coeffs[::-1]:
        out = out * z + mat
    return out


def _transpose_perm(d: int) -> np.ndarray:
    p = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            p[i * d + j, j * d + i] = 1.0
    return p


def _add_block(big, row_k, col_j, bs, rr, ri, ir, ii):
    half = bs // 2
    r0, c0 = row_k * bs, col_j * bs
    big[r0 : r0 + half, c0 : c0 + half] += rr
    big[r0 : r0 + half, c0 + half : c0 + bs] += ri
    big[r0 + half : r0 + bs, c0 : c0 + half] += ir
    big[r0 + half : r0 + bs, c0 + half : c0 + bs] += ii


def factor_residual(A: MatPoly, phi: LaurentHerm, n_grid: int = 512) -> float:
    """sup over the circle grid of |A(z)^*A(z) - phi(z)| entrywise."""
    n = max(n_grid, pow2_at_least(4 * max(A.degree, phi.half_degree) + 1))
    z = circle_grid(n)
    av = A(z)
    pv = phi(z)
    if not phi.is_matrix:
        pv = pv[:, None, None]
    return float(np.abs(np.conj(av).transpose(0, 2, 1) @ av - pv).max())


def outer_check(A: MatPoly | CPoly) -> float:
    """Outerness gap: |log|det A(0)| - circle mean of log|det A||.

    For a polynomial determinant the circle mean of log|det A| is evaluated
    exactly through the roots (the mean of log|z - r| over the circle is
    log max(|r|, 1)), so the gap reduces to -sum_{|r|<1} log|r|; an
    equispaced grid with singular points excluded would carry an O(log N / N)
    bias far above the tolerances used here.  The grid is still swept to
    detect degenerate determinants.
    """
    det = A if isinstance(A, CPoly) else A.det_poly()
    if det.is_zero:
        raise DegenerateDeterminant("determinant vanishes identically")
    n = pow2_at_least(max(4 * det.degree + 1, 512))
    vals = np.abs(det(circle_grid(n)))
    excluded = int((vals < 1e-13 * max(1.0, vals.max())).sum())
    if excluded > 0.10 * n:
        raise DegenerateDeterminant(
            f"{excluded}/{n} circle points have vanishing determinant"
        )
    if det.degree == 0:
        return 0.0
    gap = 0.0
    for r, mult in poly_roots(det):
        ar = abs(r)
        if ar < 1.0:
            if ar == 0.0:
                return float("inf")
            gap -= mult * np.log(ar)
    return float(gap)
