"""Vandermonde determinants over graded bases and their maximization.

The diameter estimates come from greedily maximizing |det(e_j(z_i))| over
point tuples drawn from a candidate set on the variety, then normalizing the
log-determinant by the degree weight l_k (or by k*N_k).  The row-scale bound
compares two graded bases through the LU pivots of their exact change of
basis, which sandwiches one determinant by the other.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .bases import (
    CmGenerators,
    GradedBasis,
    QuadratureSpec,
    bb_basis,
    bb_structured,
    cm_basis,
    cm_generators,
    default_quadrature_n,
    monomial_graded_basis,
    torus_quadrature,
)
from .polyring import Polynomial
from .scalars import Exact
from .variety import VarietyPresentation, count, validate_noether


class FeketeError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# candidate samplers


@dataclass(frozen=True, eq=False)
class CompactSetSampler:
    name: str
    points: np.ndarray  # (P, N) complex

    def __len__(self) -> int:
        return self.points.shape[0]


def _lift_grid(pres: VarietyPresentation, xs: np.ndarray) -> np.ndarray:
    """Lift x-grid rows through the sheets by reusing the quadrature solver."""
    from .bases import _univariate_coeffs

    order = sorted(
        range(len(pres.generators)),
        key=lambda i: min(j for j, e in enumerate(pres.generators[i].leading_monomial()) if e),
    )
    pts: list[np.ndarray] = []
    for x in xs:
        partials = [np.concatenate([x.astype(complex), np.full(pres.ny, np.nan + 0j)])]
        for gi in order:
            g = pres.generators[gi]
            yv = min(j for j, e in enumerate(g.leading_monomial()) if e)
            m = g.leading_monomial()[yv]
            nxt = []
            for p in partials:
                coeffs = _univariate_coeffs(g, yv, p, m)
                for r in np.roots(coeffs[::-1]):
                    q = p.copy()
                    q[yv] = r
                    nxt.append(q)
            partials = nxt
        pts.extend(partials)
    return np.array(pts) if pts else np.zeros((0, pres.N), dtype=complex)


def _check_on_variety(pres: VarietyPresentation, points: np.ndarray, tol: float = 1e-8):
    for g in pres.generators:
        res = np.abs(g.evaluate(points))
        if res.size and float(res.max()) > tol:
            raise ValueError(f"candidate points leave the variety: residual {float(res.max()):.3e}")


def torus_sampler(pres: VarietyPresentation, nodes: int) -> CompactSetSampler:
    """Unit-circle grids in each x variable, lifted through the sheets."""
    circle = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    grids = np.meshgrid(*([circle] * pres.M), indexing="ij")
    xs = np.stack([g.ravel() for g in grids], axis=1)
    pts = _lift_grid(pres, xs)
    _check_on_variety(pres, pts, 1e-8)
    return CompactSetSampler(name=f"torus:{nodes}", points=pts)


def segment_sampler(pres: VarietyPresentation, nodes: int) -> CompactSetSampler:
    """Equispaced grids on [-1, 1] in each x variable, lifted through the sheets."""
    seg = np.linspace(-1.0, 1.0, nodes).astype(complex)
    grids = np.meshgrid(*([seg] * pres.M), indexing="ij")
    xs = np.stack([g.ravel() for g in grids], axis=1)
    pts = _lift_grid(pres, xs)
    _check_on_variety(pres, pts, 1e-8)
    return CompactSetSampler(name=f"segment:{nodes}", points=pts)


def points_sampler(pres: VarietyPresentation, points: np.ndarray, name: str = "points") -> CompactSetSampler:
    pts = np.asarray(points, dtype=complex)
    if pts.ndim != 2 or pts.shape[1] != pres.N:
        raise ValueError(f"points must have shape (P, {pres.N})")
    _check_on_variety(pres, pts, 1e-8)
    return CompactSetSampler(name=name, points=pts)


def file_sampler(pres: VarietyPresentation, path) -> CompactSetSampler:
    """Points from a JSON file: a list of rows, each a list of numbers or
    [re, im] pairs."""
    doc = json.loads(Path(path).read_text())
    rows = []
    for row in doc:
        vals = []
        for entry in row:
            if isinstance(entry, (list, tuple)):
                vals.append(complex(entry[0], entry[1]))
            else:
                vals.append(complex(entry))
        rows.append(vals)
    return points_sampler(pres, np.array(rows, dtype=complex), name=f"file:{path}")


def random_variety_points(
    pres: VarietyPresentation, count_: int, seed: int, radius: tuple[float, float] = (0.6, 1.4)
) -> CompactSetSampler:
    """Generic points: random x in an annulus, one random sheet per point."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    pts = []
    while len(pts) < count_:
        r = rng.uniform(radius[0], radius[1], size=pres.M)
        th = rng.uniform(0.0, 2.0 * np.pi, size=pres.M)
        x = (r * np.exp(1j * th)).reshape(1, -1)
        lifted = _lift_grid(pres, x)
        if lifted.shape[0] == 0:
            continue
        pts.append(lifted[rng.integers(lifted.shape[0])])
    out = np.array(pts)
    _check_on_variety(pres, out, 1e-8)
    return CompactSetSampler(name=f"random:{seed}", points=out)


# ---------------------------------------------------------------------------
# Vandermonde evaluation


def vdm_matrix(basis: GradedBasis, points: np.ndarray) -> np.ndarray:
    """Matrix e_j(z_i): rows are points, columns are basis elements."""
    cols = [e.evaluate(points) for e in basis.elements]
    return np.stack(cols, axis=1)


def _slogabs(a: np.ndarray) -> float:
    sign, logdet = np.linalg.slogdet(a)
    return float(logdet) if sign != 0 else -math.inf


def log_abs_vdm(basis: GradedBasis, points: np.ndarray) -> float:
    a = vdm_matrix(basis, points)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got {a.shape}")
    return _slogabs(a)


@dataclass(frozen=True)
class VdmEvaluation:
    indices: tuple[int, ...]
    log_abs: float


# ---------------------------------------------------------------------------
# Fekete-style maximization


def _greedy_init(E: np.ndarray) -> list[int]:
    """Column-pivoted orthogonalization over the candidate rows: repeatedly
    take the row with the largest residual norm."""
    P, N = E.shape
    work = E.copy().astype(complex)
    chosen: list[int] = []
    for _ in range(N):
        norms = np.einsum("ij,ij->i", work, np.conj(work)).real
        for idx in chosen:
            norms[idx] = -1.0
        j = int(np.argmax(norms))
        if norms[j] <= 1e-28:
            break
        chosen.append(j)
        q = work[j] / math.sqrt(norms[j])
        work -= np.outer(work @ np.conj(q), q)
    return chosen


@dataclass(frozen=True)
class FeketeResult:
    indices: tuple[int, ...]
    log_abs: float
    sweeps: int
    starts: int
    start_logs: tuple[float, ...]


def _sweep_to_convergence(E: np.ndarray, sel: list[int], max_sweeps: int) -> tuple[list[int], float, int]:
    N = len(sel)
    sign, log_abs = np.linalg.slogdet(E[sel])
    if sign == 0:
        return sel, -math.inf, 0
    log_abs = float(log_abs)
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        gain = 0.0
        for s in range(N):
            A = E[sel]
            rhs = np.zeros(N, dtype=complex)
            rhs[s] = 1.0
            try:
                bcol = np.linalg.solve(A, rhs)
            except np.linalg.LinAlgError:
                break
            ratios = np.abs(E @ bcol)
            c = int(np.argmax(ratios))
            if ratios[c] > 1.0 + 1e-14 and c not in sel:
                sel[s] = c
                gain += math.log(ratios[c])
                sign, log_abs = np.linalg.slogdet(E[sel])
                log_abs = float(log_abs) if sign != 0 else -math.inf
        if gain < 1e-12:
            break
    return sel, log_abs, sweeps


def fekete_maximize(
    basis: GradedBasis,
    sampler: CompactSetSampler,
    *,
    seed: int = 0,
    starts: int = 1,
    exhaustive: bool = False,
    max_sweeps: int = 200,
) -> FeketeResult:
    """Greedy coordinate-exchange maximization of |det| over point tuples.

    Multistart uses independent random initial subsets; `exhaustive` instead
    runs one start per candidate with that candidate forced into the first
    slot of the initial tuple."""
    E = vdm_matrix(basis, sampler.points)
    P, N = E.shape
    if P < N:
        raise FeketeError(f"need at least {N} candidates, got {P}")
    base_init = _greedy_init(E)
    if len(base_init) < N:
        raise FeketeError("candidate set does not span the basis (rank-deficient)")
    inits: list[list[int]] = []
    if exhaustive:
        for c in range(P):
            init = list(base_init)
            if c in init:
                init.remove(c)
            else:
                init.pop()
            inits.append([c] + init)
    else:
        inits.append(list(base_init))
        if starts > 1:
            seq = np.random.SeedSequence(seed)
            for child in seq.spawn(starts - 1):
                rng = np.random.default_rng(child)
                init = None
                for _ in range(20):
                    cand = list(rng.choice(P, size=N, replace=False))
                    if np.linalg.slogdet(E[cand])[0] != 0:
                        init = cand
                        break
                inits.append(init if init is not None else list(base_init))
    best: Optional[tuple[list[int], float, int]] = None
    start_logs: list[float] = []
    for init in inits:
        sel, log_abs, sweeps = _sweep_to_convergence(E, list(init), max_sweeps)
        start_logs.append(log_abs)
        if best is None or log_abs > best[1]:
            best = (sel, log_abs, sweeps)
    assert best is not None
    sel, log_abs, sweeps = best
    indices = tuple(sorted(sel))
    # re-evaluate on the sorted rows so the reported value is independent of
    # the order the slots were filled in
    if math.isfinite(log_abs):
        log_abs = _slogabs(E[list(indices)])
    return FeketeResult(
        indices=indices,
        log_abs=log_abs,
        sweeps=sweeps,
        starts=len(inits),
        start_logs=tuple(start_logs),
    )


def brute_force_max(basis: GradedBasis, sampler: CompactSetSampler) -> VdmEvaluation:
    E = vdm_matrix(basis, sampler.points)
    P, N = E.shape
    best_log, best_idx = -math.inf, None
    for combo in combinations(range(P), N):
        sign, log_abs = np.linalg.slogdet(E[list(combo)])
        if sign != 0 and log_abs > best_log:
            best_log, best_idx = float(log_abs), combo
    if best_idx is None:
        raise FeketeError("all tuples are singular")
    return VdmEvaluation(indices=tuple(best_idx), log_abs=best_log)


# ---------------------------------------------------------------------------
# diameter sequences


@dataclass(frozen=True)
class DiameterEstimate:
    kind: str
    k: int
    N: int
    l: int
    log_vdm: float
    est_lk: float
    est_kNk: float
    indices: tuple[int, ...]


def build_basis(
    pres: VarietyPresentation,
    kind: str,
    k: int,
    *,
    gens: Optional[CmGenerators] = None,
    quad: Optional[QuadratureSpec] = None,
) -> GradedBasis:
    if kind == "monomial":
        return monomial_graded_basis(pres, k)
    if kind == "cm":
        return cm_basis(pres, k, gens if gens is not None else cm_generators(pres))
    if kind == "bb":
        if quad is None:
            quad = torus_quadrature(pres, default_quadrature_n(k))
        return bb_basis(pres, k, quad)
    if kind == "bb_structured":
        if quad is None:
            quad = torus_quadrature(pres, default_quadrature_n(k))
        return bb_structured(pres, k, quad)
    raise ValueError(f"unknown basis kind {kind!r}")


def _prefix(basis: GradedBasis, k: int) -> GradedBasis:
    keep = [i for i, d in enumerate(basis.degrees) if d <= k]
    return GradedBasis(
        kind=basis.kind,
        k=k,
        elements=tuple(basis.elements[i] for i in keep),
        degrees=tuple(basis.degrees[i] for i in keep),
        label=basis.label,
    )


def diameter_sequence(
    pres: VarietyPresentation,
    kind: str,
    k_max: int,
    sampler: CompactSetSampler,
    *,
    gens: Optional[CmGenerators] = None,
    quad: Optional[QuadratureSpec] = None,
    seed: int = 0,
    starts: int = 1,
) -> list[DiameterEstimate]:
    full = build_basis(pres, kind, k_max, gens=gens, quad=quad)
    out: list[DiameterEstimate] = []
    for k in range(1, k_max + 1):
        basis = _prefix(full, k)
        rec = count(pres, k)
        res = fekete_maximize(basis, sampler, seed=seed, starts=starts)
        out.append(
            DiameterEstimate(
                kind=kind,
                k=k,
                N=rec.N,
                l=rec.l,
                log_vdm=res.log_abs,
                est_lk=res.log_abs / rec.l,
                est_kNk=res.log_abs / (k * rec.N),
                indices=res.indices,
            )
        )
    return out


@dataclass(frozen=True)
class CompareReport:
    kinds: tuple[str, ...]
    k_values: tuple[int, ...]
    estimates: dict
    spreads: tuple[float, ...]
    nonincreasing: bool


def compare_bases(
    pres: VarietyPresentation,
    kinds: Sequence[str],
    k_max: int,
    sampler: CompactSetSampler,
    *,
    gens: Optional[CmGenerators] = None,
    quad: Optional[QuadratureSpec] = None,
    seed: int = 0,
    starts: int = 1,
) -> CompareReport:
    """Diameter estimates for several bases over one shared candidate set."""
    seqs = {
        kind: diameter_sequence(
            pres, kind, k_max, sampler, gens=gens, quad=quad, seed=seed, starts=starts
        )
        for kind in kinds
    }
    spreads = []
    for i in range(k_max):
        vals = [seqs[kind][i].est_lk for kind in kinds]
        spreads.append(max(abs(a - b) for a in vals for b in vals))
    noninc = all(spreads[i + 1] <= spreads[i] + 1e-12 for i in range(len(spreads) - 1))
    return CompareReport(
        kinds=tuple(kinds),
        k_values=tuple(range(1, k_max + 1)),
        estimates=seqs,
        spreads=tuple(spreads),
        nonincreasing=noninc,
    )


# ---------------------------------------------------------------------------
# row-scale bounds between bases


def _coef_matrix_exact(basis: GradedBasis, monos: list) -> list[list[Exact]]:
    idx = {m: j for j, m in enumerate(monos)}
    out = []
    for e in basis.elements:
        row = [Exact(0)] * len(monos)
        for m, c in e.items():
            row[idx[m]] = c
        out.append(row)
    return out


def _exact_change_of_basis(bc: list[list[Exact]], cc: list[list[Exact]]) -> list[list[Exact]]:
    """T with T @ C = B, via row reduction of C carrying combination vectors."""
    n, width = len(cc), len(cc[0])
    rows = [list(r) for r in cc]
    combos = [[Exact(1) if j == i else Exact(0) for j in range(n)] for i in range(n)]
    piv_cols: list[int] = []
    r = 0
    for col in range(width):
        pr = next((i for i in range(r, n) if not rows[i][col].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        combos[r], combos[pr] = combos[pr], combos[r]
        inv = rows[r][col].inverse()
        rows[r] = [v * inv for v in rows[r]]
        combos[r] = [v * inv for v in combos[r]]
        for i in range(n):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
                combos[i] = [a - f * b for a, b in zip(combos[i], combos[r])]
        piv_cols.append(col)
        r += 1
        if r == n:
            break
    if r < n:
        raise ValueError("second basis has linearly dependent elements")
    t_rows: list[list[Exact]] = []
    for b in bc:
        resid = list(b)
        coefs = [Exact(0)] * n
        for i, col in enumerate(piv_cols):
            f = resid[col]
            if f.is_zero():
                continue
            coefs[i] = f
            resid = [a - f * v for a, v in zip(resid, rows[i])]
        if any(not v.is_zero() for v in resid):
            raise ValueError("bases do not span the same monomial space")
        t_rows.append([sum((coefs[i] * combos[i][j] for i in range(n)), Exact(0)) for j in range(n)])
    return t_rows


def _first_nonzero_pivots_exact(t: list[list[Exact]]) -> list[Exact]:
    n = len(t)
    work = [list(r) for r in t]
    used: set[int] = set()
    pivots: list[Exact] = []
    for col in range(n):
        pr = next((i for i in range(n) if i not in used and not work[i][col].is_zero()), None)
        if pr is None:
            raise ValueError("change of basis is singular")
        used.add(pr)
        piv = work[pr][col]
        pivots.append(piv)
        inv = piv.inverse()
        for i in range(n):
            if i not in used and not work[i][col].is_zero():
                f = work[i][col] * inv
                work[i] = [a - f * b for a, b in zip(work[i], work[pr])]
    return pivots


def _first_nonzero_pivots_float(t: np.ndarray, zero_tol: float = 1e-10) -> list[complex]:
    n = t.shape[0]
    work = t.astype(complex).copy()
    scale = max(1.0, float(np.max(np.abs(work))))
    used: set[int] = set()
    pivots: list[complex] = []
    for col in range(n):
        pr = next(
            (i for i in range(n) if i not in used and abs(work[i, col]) > zero_tol * scale),
            None,
        )
        if pr is None:
            raise ValueError("change of basis is numerically singular")
        used.add(pr)
        piv = complex(work[pr, col])
        pivots.append(piv)
        for i in range(n):
            if i not in used and abs(work[i, col]) > 0:
                work[i] -= (work[i, col] / piv) * work[pr]
    return pivots


@dataclass(frozen=True)
class ScaleBoundReport:
    m: float
    Mx: float
    pivot_abs: tuple[float, ...]
    log_abs_det: float
    triples: tuple[tuple[float, float, float], ...]
    sandwich_ok: bool
    identity_rel_errors: tuple[float, ...]
    identity_ok: bool
    mode: str


def row_scale_bound(
    basis_b: GradedBasis,
    basis_c: GradedBasis,
    point_sets: Sequence[np.ndarray] = (),
    *,
    identity_tol: float = 1e-10,
) -> ScaleBoundReport:
    """Pivot bounds for the change of basis T with B = T C.

    The first-nonzero-pivot elimination of T is the only row operation that
    rescales; its pivot moduli give m and Mx with
    N log m + log|VDM_C| <= log|VDM_B| <= N log Mx + log|VDM_C|,
    and the determinant ratio of the two Vandermonde matrices must match the
    pivot-modulus product on every nonsingular tuple.
    """
    if len(basis_b) != len(basis_c):
        raise ValueError("bases must have the same length")
    n = len(basis_b)
    monos = sorted(
        {m for e in basis_b.elements for m in e.monomials()}
        | {m for e in basis_c.elements for m in e.monomials()},
        key=lambda m: (sum(m), tuple(reversed(m))),
    )
    exact = all(e.mode == "exact" for e in basis_b.elements + basis_c.elements)
    if exact:
        bc = _coef_matrix_exact(basis_b, monos)
        cc = _coef_matrix_exact(basis_c, monos)
        t_rows = _exact_change_of_basis(bc, cc)
        pivots = _first_nonzero_pivots_exact(t_rows)
        piv_abs = [abs(p.to_complex()) for p in pivots]
        mode = "exact"
    else:
        idx = {m: j for j, m in enumerate(monos)}

        def fmat(basis):
            out = np.zeros((n, len(monos)), dtype=complex)
            for i, e in enumerate(basis.elements):
                for m, c in e.items():
                    out[i, idx[m]] = complex(c) if e.mode == "float" else c.to_complex()
            return out

        bm, cm_ = fmat(basis_b), fmat(basis_c)
        t, *_ = np.linalg.lstsq(cm_.T, bm.T, rcond=None)
        t = t.T
        resid = float(np.max(np.abs(t @ cm_ - bm)))
        if resid > 1e-8 * max(1.0, float(np.max(np.abs(bm)))):
            raise ValueError(f"bases do not span the same space (residual {resid:.3e})")
        pivots_f = _first_nonzero_pivots_float(t)
        piv_abs = [abs(p) for p in pivots_f]
        mode = "float"
    m, mx = min(piv_abs), max(piv_abs)
    log_det = sum(math.log(p) for p in piv_abs)
    triples: list[tuple[float, float, float]] = []
    id_errs: list[float] = []
    sandwich = True
    for pts in point_sets:
        lb = log_abs_vdm(basis_b, pts)
        lc = log_abs_vdm(basis_c, pts)
        lo, hi = n * math.log(m) + lc, n * math.log(mx) + lc
        triples.append((lo, lb, hi))
        if not (lo - 1e-9 <= lb <= hi + 1e-9):
            sandwich = False
        err = abs((lb - lc) - log_det) / max(1.0, abs(log_det))
        id_errs.append(err)
    identity_ok = all(e <= identity_tol for e in id_errs)
    return ScaleBoundReport(
        m=m,
        Mx=mx,
        pivot_abs=tuple(piv_abs),
        log_abs_det=log_det,
        triples=tuple(triples),
        sandwich_ok=sandwich,
        identity_rel_errors=tuple(id_errs),
        identity_ok=identity_ok,
        mode=mode,
    )


# ---------------------------------------------------------------------------
# bb vs structured normalization


@dataclass(frozen=True)
class BbNormalizationReport:
    diag_abs: tuple[float, ...]
    min_diag: float
    max_diag: float
    degree_triangular_ok: bool
    first_nonunit: Optional[tuple[int, float]]


def bb_normalization(
    pres: VarietyPresentation, k: int, quad: QuadratureSpec
) -> BbNormalizationReport:
    """Change of basis from the structured to the fully orthonormalized basis:
    block-triangular across degrees; the diagonal moduli measure how far the
    structured family is from orthonormal."""
    full = bb_basis(pres, k, quad)
    st = bb_structured(pres, k, quad)
    monos = sorted(
        {m for e in full.elements + st.elements for m in e.monomials()},
        key=lambda m: (sum(m), tuple(reversed(m))),
    )
    idx = {m: j for j, m in enumerate(monos)}

    def fmat(basis):
        out = np.zeros((len(basis), len(monos)), dtype=complex)
        for i, e in enumerate(basis.elements):
            for m, c in e.items():
                out[i, idx[m]] = complex(c)
        return out

    bm, sm = fmat(full), fmat(st)
    t, *_ = np.linalg.lstsq(sm.T, bm.T, rcond=None)
    t = t.T
    n = t.shape[0]
    tri_ok = True
    for i in range(n):
        for j in range(n):
            if st.degrees[j] > full.degrees[i] and abs(t[i, j]) > 1e-8:
                tri_ok = False
    diag = tuple(float(abs(t[i, i])) for i in range(n))
    first_nonunit = None
    for i, v in enumerate(diag):
        if abs(v - 1.0) > 1e-6:
            first_nonunit = (i, v)
            break
    return BbNormalizationReport(
        diag_abs=diag,
        min_diag=min(diag),
        max_diag=max(diag),
        degree_triangular_ok=tri_ok,
        first_nonunit=first_nonunit,
    )
