"""Numeric search for real bottleneck pairs.

Multistart damped Newton on the square multiplier system from
`build_lagrange_system`: sample the variety by Gauss-Newton projection of a
jittered grid, pair up the samples, initialize the multipliers by least
squares, then iterate Newton with step halving.  Converged solutions are
verified against the independent minor formulation, canonicalized as
unordered pairs, deduplicated, classified as isolated or not by the
singular values of the system Jacobian, and sorted by separation.

The search is heuristic: results always carry possibly_incomplete=True and
the found count should be compared against the BND-derived complex bound,
never read as exhaustive.

Newton steps use a pseudoinverse with a relative cutoff instead of a plain
solve, so solutions lying on positive-dimensional families (where the
Jacobian is exactly singular along the family) still converge in the
normal directions instead of blowing up; those families are then reported
through finitely many non-isolated representatives.

Set BND_THREADS to split the Newton batches across worker threads; the
merge is order-preserving, so the thread count never changes the output.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .systems import Poly, PolySystem, build_lagrange_system, build_minor_system

# singular values below RANK_CUTOFF * sigma_max count as zero, both for the
# Newton pseudoinverse and for the isolation flag
RANK_CUTOFF = 1e-8


@dataclass(frozen=True)
class SolverConfig:
    """Search parameters.  box is one (lo, hi) interval per coordinate;
    leave box/density as None for defaults chosen from the dimension
    (box (-3.5, 3.5) everywhere; density 20 for curves in the plane,
    10 in 3-space, 6 beyond)."""

    box: tuple[tuple[float, float], ...] | None = None
    density: int | None = None
    newton_max_iter: int = 100
    residual_tol: float = 1e-10
    cluster_radius: float = 1e-6
    sep_threshold: float = 1e-4
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.sep_threshold > self.cluster_radius > 0:
            raise ValueError("need sep_threshold > cluster_radius > 0")
        if self.density is not None and self.density < 2:
            raise ValueError("density must be >= 2")
        if self.residual_tol <= 0 or self.newton_max_iter < 1:
            raise ValueError("bad tolerance or iteration cap")
        if self.box is not None:
            for lo, hi in self.box:
                if not lo < hi:
                    raise ValueError(f"empty box interval ({lo}, {hi})")

    def box_for(self, n: int) -> tuple[tuple[float, float], ...]:
        if self.box is not None:
            if len(self.box) != n:
                raise ValueError(f"box has {len(self.box)} intervals, need {n}")
            return self.box
        return tuple((-3.5, 3.5) for _ in range(n))

    def density_for(self, n: int) -> int:
        if self.density is not None:
            return self.density
        return {2: 20, 3: 10}.get(n, 6)


@dataclass(frozen=True)
class BottleneckPair:
    x: tuple[float, ...]
    y: tuple[float, ...]
    separation: float
    residual: float
    lam: tuple[float, ...]
    mu: tuple[float, ...]
    isolated: bool


@dataclass(frozen=True)
class SolveResult:
    pairs: tuple[BottleneckPair, ...]
    possibly_incomplete: bool
    diagnostics: dict = field(compare=False)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


# ---------------------------------------------------------------------------
# compiled evaluation
# ---------------------------------------------------------------------------


class _CompiledPoly:
    __slots__ = ("exps", "coeffs")

    def __init__(self, p: Poly):
        if p.is_zero():
            self.exps = np.zeros((1, p.nvars), dtype=np.int64)
            self.coeffs = np.zeros(1)
        else:
            self.exps = np.array(list(p.terms.keys()), dtype=np.int64)
            self.coeffs = np.array([float(c) for c in p.terms.values()])

    def eval(self, pts: np.ndarray) -> np.ndarray:
        # pts: (N, nvars) -> (N,)
        powers = pts[:, None, :] ** self.exps[None, :, :]
        return powers.prod(axis=2) @ self.coeffs


class _CompiledSystem:
    """Batched evaluator for a list of polynomials and its Jacobian."""

    def __init__(self, polys: Sequence[Poly], nvars: int):
        self.nvars = nvars
        self.rows = [_CompiledPoly(p) for p in polys]
        self.jac_rows = [
            [_CompiledPoly(p.diff(j)) for j in range(nvars)] for p in polys
        ]

    def eval(self, pts: np.ndarray) -> np.ndarray:
        return np.stack([r.eval(pts) for r in self.rows], axis=1)

    def jacobian(self, pts: np.ndarray) -> np.ndarray:
        rows = [
            np.stack([c.eval(pts) for c in row], axis=1) for row in self.jac_rows
        ]
        return np.stack(rows, axis=1)  # (N, neqs, nvars)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def sample_variety(fs: Sequence[Poly], config: SolverConfig | None = None) -> np.ndarray:
    """Points on the real locus of f_1 = .. = f_k = 0, found by Gauss-Newton
    projection of a jittered grid over the search box.

    Returns an (N, n) array (possibly empty: an empty real locus is a valid
    outcome, not an error).  Points are deduplicated at a radius tied to the
    grid spacing so the sample is spread rather than clustered.
    """
    config = config or SolverConfig()
    n = fs[0].nvars
    box = config.box_for(n)
    density = config.density_for(n)
    sysc = _CompiledSystem(list(fs), n)
    rng = np.random.default_rng(config.seed)

    axes = [np.linspace(lo, hi, density) for lo, hi in box]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    jitter = np.array([(hi - lo) / density for lo, hi in box]) * 0.25
    pts = grid + rng.uniform(-1, 1, grid.shape) * jitter

    for _ in range(40):
        vals = sysc.eval(pts)
        if np.max(np.abs(vals), initial=0.0) < config.residual_tol * 1e-2:
            break
        jac = sysc.jacobian(pts)
        step = (np.linalg.pinv(jac, rcond=RANK_CUTOFF) @ vals[:, :, None])[:, :, 0]
        # cap step length at 1: huge Gauss-Newton steps near gradient
        # degeneracies would fling points out of the box
        norm = np.linalg.norm(step, axis=1, keepdims=True)
        pts = pts - step * np.minimum(1.0, 1.0 / np.maximum(norm, 1e-30))

    vals = sysc.eval(pts)
    good = np.max(np.abs(vals), axis=1) < config.residual_tol
    lo = np.array([b[0] for b in box]) - 0.5
    hi = np.array([b[1] for b in box]) + 0.5
    good &= np.all((pts >= lo) & (pts <= hi), axis=1)
    pts = pts[good]
    if pts.size == 0:
        return pts.reshape(0, n)

    span = max(b[1] - b[0] for b in box)
    # surfaces carry quadratically many sample points, and the search later
    # pairs samples quadratically again; thin them harder than curves
    spread = 1.5 if n - len(fs) >= 2 else 3.0
    radius = max(config.cluster_radius, span / (spread * density))
    order = np.lexsort(pts.T[::-1])
    kept: list[np.ndarray] = []
    for idx in order:
        p = pts[idx]
        if all(np.linalg.norm(p - q) > radius for q in kept):
            kept.append(p)
    return np.array(kept)


# ---------------------------------------------------------------------------
# Newton on the square system
# ---------------------------------------------------------------------------


def _newton_batch(
    sysc: _CompiledSystem, z0: np.ndarray, config: SolverConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Damped Newton from each row of z0.  Returns (solutions, residuals);
    rows that diverged carry nan."""
    z = z0.copy()
    n_pts = z.shape[0]
    if n_pts == 0:
        return z, np.zeros(0)
    res = np.max(np.abs(sysc.eval(z)), axis=1)
    active = np.ones(n_pts, dtype=bool)
    freeze_tol = config.residual_tol * 1e-2

    for _ in range(config.newton_max_iter):
        active &= res > freeze_tol
        active &= np.isfinite(res)
        if not active.any():
            break
        za = z[active]
        vals = sysc.eval(za)
        jac = sysc.jacobian(za)
        step = (np.linalg.pinv(jac, rcond=RANK_CUTOFF) @ vals[:, :, None])[:, :, 0]

        # step halving: accept the first candidate that reduces the residual
        t = np.ones(len(za))
        best = za - step
        best_res = np.max(np.abs(sysc.eval(best)), axis=1)
        cur_res = res[active]
        for _ in range(30):
            need = ~(best_res < cur_res) & np.isfinite(t)
            if not need.any():
                break
            t[need] *= 0.5
            cand = za[need] - t[need, None] * step[need]
            cand_res = np.max(np.abs(sysc.eval(cand)), axis=1)
            improved = cand_res < best_res[need]
            rows = np.where(need)[0][improved]
            best[rows] = cand[improved]
            best_res[rows] = cand_res[improved]
        stalled = ~(best_res < cur_res)
        best[stalled] = np.nan
        best_res[stalled] = np.nan
        z[active] = best
        res[active] = best_res

    # polish: two undamped steps sharpen converged roots to machine precision
    done = np.isfinite(res) & (res < config.residual_tol * 10)
    for _ in range(2):
        if not done.any():
            break
        zd = z[done]
        vals = sysc.eval(zd)
        jac = sysc.jacobian(zd)
        step = (np.linalg.pinv(jac, rcond=RANK_CUTOFF) @ vals[:, :, None])[:, :, 0]
        cand = zd - step
        cand_res = np.max(np.abs(sysc.eval(cand)), axis=1)
        better = cand_res <= res[done]
        rows = np.where(done)[0][better]
        z[rows] = cand[better]
        res[rows] = cand_res[better]
    return z, res


def _canonical_pair(x: np.ndarray, y: np.ndarray, tol: float) -> bool:
    """True if (x, y) is already in canonical order: x before y in a
    tolerance-aware lexicographic comparison (noise-stable for pairs with
    mirrored coordinates)."""
    for a, b in zip(x, y):
        if abs(a - b) > tol:
            return a < b
    return True


def find_bottlenecks(
    fs: Sequence[Poly], config: SolverConfig | None = None
) -> SolveResult:
    """Real bottleneck pairs of the variety f_1 = ... = f_k = 0.

    Hypersurfaces and codimension-2 complete intersections (k = 1 or 2).
    Pairs are unordered, deduplicated, verified against the minor
    formulation, and sorted by separation.
    """
    config = config or SolverConfig()
    fs = list(fs)
    if not fs or len(fs) > 2:
        raise ValueError("supported inputs: 1 or 2 defining polynomials")
    n = fs[0].nvars
    k = len(fs)
    if k >= n:
        raise ValueError("need positive-dimensional variety (k < n)")

    lag = build_lagrange_system(fs)
    minor = build_minor_system(fs, n - k)
    lag_c = _CompiledSystem(list(lag.polynomials), len(lag.variables))
    minor_c = _CompiledSystem(list(minor.polynomials), 2 * n)
    grad_c = _CompiledSystem([f.diff(j) for f in fs for j in range(n)], n)

    samples = sample_variety(fs, config)
    diagnostics = {"samples": int(len(samples))}

    idx_i, idx_j = np.triu_indices(len(samples), k=1)
    if len(idx_i):
        seps = np.linalg.norm(samples[idx_i] - samples[idx_j], axis=1)
        wide = seps > 2 * config.sep_threshold
        idx_i, idx_j = idx_i[wide], idx_j[wide]
    starts = len(idx_i)
    diagnostics["start_pairs"] = int(starts)

    if starts == 0:
        diagnostics.update(converged=0, verified=0, threads=1)
        return SolveResult((), True, diagnostics)

    a, b = samples[idx_i], samples[idx_j]
    # multiplier init: least-squares fit of x - y against the gradients
    grads_a = grad_c.eval(a).reshape(starts, k, n).transpose(0, 2, 1)
    grads_b = grad_c.eval(b).reshape(starts, k, n).transpose(0, 2, 1)
    lam0 = (np.linalg.pinv(grads_a) @ (a - b)[:, :, None])[:, :, 0]
    mu0 = (np.linalg.pinv(grads_b) @ (a - b)[:, :, None])[:, :, 0]
    z0 = np.concatenate([a, b, lam0, mu0], axis=1)

    threads = max(1, int(os.environ.get("BND_THREADS", "1") or "1"))
    diagnostics["threads"] = threads
    if threads == 1 or starts < 2 * threads:
        z, res = _newton_batch(lag_c, z0, config)
    else:
        chunks = np.array_split(z0, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _newton_batch(lag_c, c, config), chunks))
        z = np.concatenate([p[0] for p in parts])
        res = np.concatenate([p[1] for p in parts])

    ok = np.isfinite(res) & (res < config.residual_tol)
    diagnostics["converged"] = int(ok.sum())
    diagnostics["diverged"] = int(starts - ok.sum())
    z, res = z[ok], res[ok]

    x, y = z[:, :n], z[:, n : 2 * n]
    sep = np.linalg.norm(x - y, axis=1)
    off_diag = sep > config.sep_threshold
    z, res, sep = z[off_diag], res[off_diag], sep[off_diag]

    # independent cross-check against the minor formulation
    if len(z):
        minor_res = np.max(np.abs(minor_c.eval(z[:, : 2 * n])), axis=1)
        verified = minor_res < config.residual_tol
        z, res, sep = z[verified], res[verified], sep[verified]
        res = np.maximum(res, minor_res[verified])
    diagnostics["verified"] = int(len(z))

    # canonical orientation, then greedy dedup of unordered pairs
    candidates = []
    for row, r, s in zip(z, res, sep):
        x, y = row[:n].copy(), row[n : 2 * n].copy()
        lam, mu = row[2 * n : 2 * n + k].copy(), row[2 * n + k :].copy()
        if not _canonical_pair(x, y, config.cluster_radius):
            # both multiplier blocks are written against x - y, so swapping
            # the endpoints negates and exchanges the multipliers
            x, y, lam, mu = y, x, -mu, -lam
        candidates.append(
            (
                float(s),
                tuple(map(float, x)),
                tuple(map(float, y)),
                float(r),
                tuple(map(float, lam)),
                tuple(map(float, mu)),
            )
        )
    candidates.sort()

    kept_keys = np.zeros((0, 2 * n))
    pairs = []
    for s, xx, yy, r, lam, mu in candidates:
        key = np.array(xx + yy)
        if len(kept_keys) and (
            np.linalg.norm(kept_keys - key, axis=1).min() <= config.cluster_radius
        ):
            continue
        kept_keys = np.vstack([kept_keys, key])
        zvec = np.array(xx + yy + lam + mu)
        pairs.append(
            BottleneckPair(
                x=xx,
                y=yy,
                separation=s,
                residual=r,
                lam=lam,
                mu=mu,
                isolated=_isolated(lag_c, zvec),
            )
        )
    diagnostics["pairs"] = len(pairs)
    return SolveResult(tuple(pairs), True, diagnostics)


def _isolated(sysc: _CompiledSystem, zvec: np.ndarray) -> bool:
    jac = sysc.jacobian(zvec[None, :])[0]
    sing = np.linalg.svd(jac, compute_uv=False)
    return bool(sing[-1] >= RANK_CUTOFF * sing[0])


def classify_isolation(pair: BottleneckPair, system: PolySystem) -> bool:
    """Isolation of a solution of the square multiplier system: False when
    the system Jacobian there is numerically rank-deficient (smallest
    singular value below 1e-8 times the largest), which is how solutions on
    positive-dimensional bottleneck families announce themselves."""
    zvec = np.array(pair.x + pair.y + pair.lam + pair.mu)
    if len(system.variables) != zvec.size:
        raise ValueError("pair does not match the system's variables")
    sysc = _CompiledSystem(list(system.polynomials), len(system.variables))
    return _isolated(sysc, zvec)


def narrowest_bottleneck(pairs: Sequence[BottleneckPair]) -> tuple[BottleneckPair, float]:
    """Minimum-separation isolated pair; half its separation bounds the
    reach from above."""
    isolated = [p for p in pairs if p.isolated]
    if not isolated:
        raise ValueError("no isolated pairs to take the narrowest of")
    best = min(isolated, key=lambda p: p.separation)
    return best, best.separation


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------


def result_json(result: SolveResult) -> dict:
    return {
        "pairs": [
            {
                "x": list(p.x),
                "y": list(p.y),
                "separation": p.separation,
                "residual": p.residual,
                "isolated": p.isolated,
            }
            for p in result.pairs
        ],
        "possibly_incomplete": result.possibly_incomplete,
        "diagnostics": result.diagnostics,
    }


def result_table(result: SolveResult) -> str:
    lines = [f"{'separation':>12}  {'isolated':>8}  {'residual':>9}  pair"]
    for p in result.pairs:
        xs = "(" + ", ".join(f"{v:.6g}" for v in p.x) + ")"
        ys = "(" + ", ".join(f"{v:.6g}" for v in p.y) + ")"
        lines.append(
            f"{p.separation:12.8f}  {str(p.isolated):>8}  {p.residual:9.1e}  {xs} -- {ys}"
        )
    lines.append(
        f"{len(result.pairs)} pair(s); search is heuristic "
        f"(possibly_incomplete={result.possibly_incomplete})"
    )
    return "\n".join(lines)


def plot_data(result: SolveResult) -> str:
    """Segment list for external plotting: one line per pair, the 2n
    endpoint coordinates separated by spaces."""
    lines = ["# segment list: x1..xn y1..yn, one bottleneck pair per line"]
    for p in result.pairs:
        lines.append(" ".join(f"{v:.17g}" for v in (*p.x, *p.y)))
    return "\n".join(lines) + "\n"


def write_json(result: SolveResult, path) -> None:
    from pathlib import Path

    Path(path).write_text(json.dumps(result_json(result), indent=2) + "\n", encoding="utf-8")
