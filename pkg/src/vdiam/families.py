"""Finitely described basis families and the compliance check.

A family is a finite union of cosets {multiplier * x^beta : supp(beta) in S}
plus finitely many extra elements.  Differences of families are computed
exactly as unions of smaller cosets; a family is `compliant` against another
when both differences admit a core description (uniform variable set, no
variable scalings), which is what the diameter comparison machinery needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .bases import CmGenerators, bb_y_block, cm_generators
from .polyring import Polynomial, parse_polynomial
from .scalars import Exact
from .variety import VarietyPresentation, decompose_A

Scalar = Union[Exact, complex]


class UnsupportedFamilyShape(Exception):
    pass


@dataclass(frozen=True)
class Coset:
    multiplier: Polynomial
    variables: frozenset[int]
    scales: tuple[tuple[int, Scalar], ...] = ()

    def scale_of(self, v: int) -> Scalar:
        for w, s in self.scales:
            if w == v:
                return s
        return Exact(1)

    def is_scaled(self) -> bool:
        return any(not _scalar_same(s, Exact(1)) for _, s in self.scales)

    def describe(self) -> str:
        names = sorted(f"x{v + 1}" for v in self.variables)
        body = f"({self.multiplier}) * monomials in {{{', '.join(names)}}}" if names else f"{self.multiplier}"
        if self.is_scaled():
            pairs = ", ".join(f"x{v + 1}->{s}" for v, s in self.scales)
            body += f" with scalings {pairs}"
        return body


@dataclass(frozen=True)
class BasisFamily:
    cosets: tuple[Coset, ...]
    finite: tuple[Polynomial, ...] = ()
    label: str = ""

    def is_empty(self) -> bool:
        return not self.cosets and not self.finite


# ---------------------------------------------------------------------------
# scalar and polynomial comparison helpers

_TOL = 1e-9


def _scalar_same(a: Scalar, b: Scalar, tol: float = _TOL) -> bool:
    if isinstance(a, Exact) and isinstance(b, Exact):
        return a == b
    ca = complex(a) if not isinstance(a, Exact) else a.to_complex()
    cb = complex(b) if not isinstance(b, Exact) else b.to_complex()
    return abs(ca - cb) <= tol * max(1.0, abs(cb))


def _trimmed(p: Polynomial) -> Polynomial:
    """Drop floating-point dust relative to the largest coefficient."""
    if p.mode == "exact" or p.is_zero():
        return p
    mx = max(abs(c) for _, c in p.items())
    kept = {m: c for m, c in p.items() if abs(c) > 1e-12 * mx}
    return Polynomial(kept, p.nx, p.nvars, "float")


def _poly_same(p: Polynomial, q: Polynomial, tol: float = _TOL) -> bool:
    if p.mode == "exact" and q.mode == "exact":
        return p == q
    pf = _trimmed(p.to_float() if p.mode == "exact" else p)
    qf = _trimmed(q.to_float() if q.mode == "exact" else q)
    monos = set(pf.monomials()) | set(qf.monomials())
    scale = max(
        [abs(c) for _, c in pf.items()] + [abs(c) for _, c in qf.items()] + [1.0]
    )
    return all(abs(complex(pf.coefficient(m)) - complex(qf.coefficient(m))) <= tol * scale for m in monos)


def _poly_ratio(p: Polynomial, q: Polynomial) -> Optional[tuple[Scalar, tuple[int, ...]]]:
    """Find (c, delta) with p == c * x^delta * q, delta integer (maybe negative)."""
    exact = p.mode == "exact" and q.mode == "exact"
    pf = p if exact else _trimmed(p.to_float() if p.mode == "exact" else p)
    qf = q if exact else _trimmed(q.to_float() if q.mode == "exact" else q)
    if pf.is_zero() or qf.is_zero() or pf.num_terms() != qf.num_terms():
        return None
    lp, lq = pf.leading_term(), qf.leading_term()
    delta = tuple(a - b for a, b in zip(lp.monomial, lq.monomial))
    dplus = tuple(max(e, 0) for e in delta)
    dminus = tuple(max(-e, 0) for e in delta)
    p1 = pf * Polynomial.monomial(dminus, pf.nx, pf.nvars, pf.mode)
    q1 = qf * Polynomial.monomial(dplus, qf.nx, qf.nvars, qf.mode)
    if exact:
        c: Scalar = lp.coefficient * lq.coefficient.inverse()
    else:
        c = complex(lp.coefficient) / complex(lq.coefficient)
    return (c, delta) if _poly_same(p1, q1 * c) else None


def _scalar_pow(s: Scalar, e: int) -> Scalar:
    if isinstance(s, Exact):
        return s**e
    return complex(s) ** e


def _scale_prod(coset: Coset, delta: Sequence[int]) -> Scalar:
    out: Scalar = Exact(1)
    for v, e in enumerate(delta):
        if e:
            out = _mul_scalar(out, _scalar_pow(coset.scale_of(v), e))
    return out


def _mul_scalar(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, Exact) and isinstance(b, Exact):
        return a * b
    ca = a.to_complex() if isinstance(a, Exact) else complex(a)
    cb = b.to_complex() if isinstance(b, Exact) else complex(b)
    return ca * cb


def _scaled_monomial_times(coset: Coset, delta: Sequence[int]) -> Polynomial:
    """multiplier * x^delta with the coset's variable scalings applied."""
    mono = tuple(delta)
    out = coset.multiplier * Polynomial.monomial(mono, coset.multiplier.nx, coset.multiplier.nvars, coset.multiplier.mode)
    s = _scale_prod(coset, delta)
    if isinstance(s, Exact) and s == Exact(1):
        return out
    if isinstance(s, Exact) and out.mode == "exact":
        return out * s
    return (out.to_float() if out.mode == "exact" else out) * (
        s.to_complex() if isinstance(s, Exact) else s
    )


def _restrict_scales(coset: Coset, keep: frozenset[int]) -> tuple[tuple[int, Scalar], ...]:
    return tuple((v, s) for v, s in coset.scales if v in keep)


# ---------------------------------------------------------------------------
# coset subtraction


def _staircase(p: Coset, dplus: tuple[int, ...]) -> list[Coset]:
    """Split {beta over S_p} into pieces with beta not >= dplus."""
    out: list[Coset] = []
    fixed = [0] * len(dplus)
    for v in sorted(v for v in range(len(dplus)) if dplus[v] > 0):
        for e in range(dplus[v]):
            shift = list(fixed)
            shift[v] = e
            mult = _scaled_monomial_times(p, shift)
            keep = p.variables - {v}
            out.append(Coset(mult, keep, _restrict_scales(p, keep)))
        fixed[v] = dplus[v]
    return out


def _slices(p: Coset, base: tuple[int, ...], pinned: Sequence[int]) -> list[Coset]:
    """Split {beta >= base over S_p : beta_v > base_v for some v in pinned}."""
    out: list[Coset] = []
    done: set[int] = set()
    for v in sorted(pinned):
        shift = list(base)
        shift[v] += 1
        mult = _scaled_monomial_times(p, shift)
        keep = p.variables - done
        out.append(Coset(mult, keep, _restrict_scales(p, keep)))
        done.add(v)
    return out


def _subtract_coset(p: Coset, g: Coset) -> list[Coset]:
    """Pieces of p not contained in g (g may be a single point: S_g empty)."""
    nvars = p.multiplier.nvars
    ratio = _poly_ratio(p.multiplier, g.multiplier)
    if ratio is None:
        return [p]
    c, delta = ratio
    dplus = tuple(max(e, 0) for e in delta)
    dminus = tuple(max(-e, 0) for e in delta)
    if any(e and v not in p.variables for v, e in enumerate(dplus)):
        return [p]
    if any(e and v not in g.variables for v, e in enumerate(dminus)):
        return [p]
    scales_differ = any(
        not _scalar_same(p.scale_of(v), g.scale_of(v))
        for v in (p.variables | g.variables)
    )
    if not scales_differ:
        # p element at beta matches g element at beta + delta when the scale
        # factors balance: c must equal s^delta.
        if not _scalar_same(c, _scale_prod(p, delta)):
            return [p]
        out = _staircase(p, dplus)
        pinned = sorted(v for v in p.variables if v not in g.variables)
        out.extend(_slices(p, dplus, pinned))
        return out
    # differing scalings: only the shift-free, factor-free overlap is supported
    if any(e for e in delta) or not _scalar_same(c, Exact(1)):
        raise UnsupportedFamilyShape(
            "cannot subtract cosets that combine differing variable scalings "
            "with a monomial shift or scalar factor"
        )
    free: set[int] = set()
    pinned_vars: list[int] = []
    for v in sorted(p.variables):
        if v not in g.variables:
            pinned_vars.append(v)
            continue
        rho = _mul_scalar(
            p.scale_of(v),
            g.scale_of(v).inverse() if isinstance(g.scale_of(v), Exact) else 1.0 / complex(g.scale_of(v)),
        )
        if _scalar_same(rho, Exact(1)):
            free.add(v)
        else:
            mod = abs(rho.to_complex() if isinstance(rho, Exact) else complex(rho))
            if abs(mod - 1.0) <= 1e-12:
                raise UnsupportedFamilyShape(
                    f"variable scaling ratio on x{v + 1} has modulus one; the overlap is not a finite union of cosets"
                )
            pinned_vars.append(v)
    # overlap = sub-coset over the scale-matched variables only
    zero = tuple(0 for _ in range(nvars))
    return _slices(p, zero, pinned_vars)


def _point_in_coset(q: Polynomial, p: Coset) -> bool:
    ratio = _poly_ratio(q, p.multiplier)
    if ratio is None:
        return False
    c, delta = ratio
    if any(e < 0 for e in delta):
        return False
    if any(e and v not in p.variables for v, e in enumerate(delta)):
        return False
    return _scalar_same(c, _scale_prod(p, delta))


def _subtract_point(p: Coset, q: Polynomial) -> list[Coset]:
    if not _point_in_coset(q, p):
        return [p]
    ratio = _poly_ratio(q, p.multiplier)
    assert ratio is not None
    _, delta = ratio
    dplus = tuple(max(e, 0) for e in delta)
    out = _staircase(p, dplus)
    out.extend(_slices(p, dplus, sorted(p.variables)))
    return out


def family_difference(left: BasisFamily, right: BasisFamily) -> BasisFamily:
    """Elements of `left` not in `right`, as a family (exact set difference)."""
    work = list(left.cosets)
    for g in right.cosets:
        work = [piece for p in work for piece in _subtract_coset(p, g)]
    for q in right.finite:
        work = [piece for p in work for piece in _subtract_point(p, q)]
    cosets: list[Coset] = []
    finite: list[Polynomial] = []
    for p in work:
        if p.variables:
            cosets.append(p)
        else:
            finite.append(p.multiplier)
    for f in left.finite:
        covered = any(_point_in_coset(f, g) for g in right.cosets) or any(
            _poly_same(f, q) for q in right.finite
        )
        if not covered:
            finite.append(f)
    return BasisFamily(tuple(cosets), tuple(finite), label=f"({left.label}) minus ({right.label})")


# ---------------------------------------------------------------------------
# cores and compliance


@dataclass(frozen=True)
class CoreResult:
    found: bool
    reason: str
    multipliers: tuple[Polynomial, ...] = ()
    t: int = 0
    variables: Optional[frozenset[int]] = None  # None = no constraint (wildcard)


def find_core(fam: BasisFamily) -> CoreResult:
    if any(c.is_scaled() for c in fam.cosets):
        return CoreResult(False, "a coset carries variable scalings")
    t = 0
    if fam.finite:
        t = max(t, 1 + max(f.degree() for f in fam.finite))
    if not fam.cosets:
        return CoreResult(True, "no cosets; any variable set works", (), t, None)
    var_sets = {c.variables for c in fam.cosets}
    if len(var_sets) > 1:
        return CoreResult(False, "cosets use different variable sets")
    mults = tuple(c.multiplier for c in fam.cosets)
    t = max(t, min(m.degree() for m in mults))
    return CoreResult(True, "core found", mults, t, var_sets.pop())


@dataclass(frozen=True)
class ComplianceVerdict:
    compliant: bool
    reason: str
    diff_left: BasisFamily
    diff_right: BasisFamily
    core_left: CoreResult
    core_right: CoreResult


def check_compliant(left: BasisFamily, right: BasisFamily) -> ComplianceVerdict:
    dl = family_difference(left, right)
    dr = family_difference(right, left)
    cl, cr = find_core(dl), find_core(dr)
    if not cl.found:
        return ComplianceVerdict(False, f"left difference has no core: {cl.reason}", dl, dr, cl, cr)
    if not cr.found:
        return ComplianceVerdict(False, f"right difference has no core: {cr.reason}", dl, dr, cl, cr)
    if cl.variables is not None and cr.variables is not None and cl.variables != cr.variables:
        return ComplianceVerdict(
            False, "difference cores use different variable sets", dl, dr, cl, cr
        )
    return ComplianceVerdict(True, "both differences admit cores", dl, dr, cl, cr)


# ---------------------------------------------------------------------------
# building families


def family_for(
    pres: VarietyPresentation,
    kind: str,
    *,
    gens: Optional[CmGenerators] = None,
    quad=None,
) -> BasisFamily:
    """Family description of a named basis kind: monomial, cm, or bb (via its
    structured variant, the finitely describable surrogate)."""
    all_x = frozenset(range(pres.M))
    if kind == "monomial":
        dec = decompose_A(pres)
        cosets = tuple(
            Coset(Polynomial.monomial(al, pres.M, pres.N, "exact"), all_x) for al in dec.A
        )
        return BasisFamily(cosets, (), label="monomial")
    if kind == "cm":
        if gens is None:
            gens = cm_generators(pres)
        prefix = frozenset(range(pres.M - 1))
        dec = decompose_A(pres)
        cosets: list[Coset] = [Coset(v, all_x) for v in gens.vs]
        finite: list[Polynomial] = []
        for alpha in dec.A:
            for l in range(max(0, gens.t - sum(alpha))):
                mono = tuple(
                    e + (l if j == pres.M - 1 else 0) for j, e in enumerate(alpha)
                )
                mult = Polynomial.monomial(mono, pres.M, pres.N, "exact")
                if prefix:
                    cosets.append(Coset(mult, prefix))
                else:
                    finite.append(mult)
        return BasisFamily(tuple(cosets), tuple(finite), label="cm")
    if kind == "bb":
        if quad is None:
            raise ValueError("bb family needs a quadrature")
        yhats, _ = bb_y_block(pres, quad)
        return BasisFamily(
            tuple(Coset(_trimmed(yh), all_x) for yh in yhats), (), label="bb"
        )
    raise ValueError(f"unknown basis kind {kind!r}; expected monomial, cm, or bb")


def _var_index(name: str, pres: VarietyPresentation) -> int:
    kind, num = name[0], name[1:]
    if kind not in ("x", "y") or not num.isdigit():
        raise ValueError(f"bad variable name {name!r}")
    j = int(num) - 1
    idx = j if kind == "x" else pres.M + j
    if not (0 <= idx < pres.N) or (kind == "x" and j >= pres.M):
        raise ValueError(f"variable {name!r} out of range")
    return idx


def parse_family(pres: VarietyPresentation, doc: dict, label: str = "") -> BasisFamily:
    """Family from its JSON description: cosets with multiplier/variables/scales
    plus optional finite extras.  Coset variables must be x variables."""
    cosets: list[Coset] = []
    for cd in doc.get("cosets", []):
        mult = parse_polynomial(cd["multiplier"], pres.M, pres.N, "exact")
        vs = frozenset(_var_index(nm, pres) for nm in cd.get("variables", []))
        if any(v >= pres.M for v in vs):
            raise ValueError("coset variables must be x variables")
        scales: list[tuple[int, Scalar]] = []
        for nm, sval in (cd.get("scales") or {}).items():
            v = _var_index(nm, pres)
            sp = parse_polynomial(str(sval), pres.M, pres.N, "exact")
            if sp.degree() > 0:
                raise ValueError(f"scale for {nm} must be a constant, got {sval!r}")
            scales.append((v, sp.coefficient((0,) * pres.N)))
        cosets.append(Coset(mult, vs, tuple(sorted(scales, key=lambda p: p[0]))))
    finite = tuple(
        parse_polynomial(s, pres.M, pres.N, "exact") for s in doc.get("finite", [])
    )
    return BasisFamily(tuple(cosets), finite, label=label or doc.get("label", ""))
