"""Univariate polynomial arithmetic, Sturm-sequence root isolation and
small dense eigensolvers.

Polynomials are dense real coefficient arrays in ascending powers.  The
degrees occurring in this library are small (at most 28), so a plain
monomial basis is used throughout; conditioning is handled upstream by
normalizing solver inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .exceptions import NotDivisible, NumericalFailure

# Relative threshold below which trailing coefficients are trimmed.
TRIM_EPS = 1e-12
# Relative remainder tolerance for exact divisions.
DIV_EPS = 1e-8


class Poly:
    """Dense univariate polynomial; ``c[k]`` multiplies ``y**k``.

    Trailing coefficients at or below ``TRIM_EPS * max|c|`` are trimmed on
    construction.  The zero polynomial has degree -1.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.float64)).ravel()
        if c.size == 0:
            c = np.zeros(1)
        m = np.max(np.abs(c))
        if m == 0.0 or not np.isfinite(m):
            c = np.zeros(1) if m == 0.0 else c
        else:
            keep = np.nonzero(np.abs(c) > TRIM_EPS * m)[0]
            c = c[: keep[-1] + 1] if keep.size else np.zeros(1)
        self.c = c

    @staticmethod
    def zero() -> "Poly":
        return Poly([0.0])

    @staticmethod
    def one() -> "Poly":
        return Poly([1.0])

    @property
    def degree(self) -> int:
        if self.c.size == 1 and self.c[0] == 0.0:
            return -1
        return self.c.size - 1

    @property
    def is_zero(self) -> bool:
        return self.degree == -1

    def __call__(self, y):
        # Horner; supports scalar or ndarray argument.
        c = self.c
        v = np.full_like(np.asarray(y, dtype=np.float64), c[-1]) if np.ndim(y) else c[-1]
        for k in range(c.size - 2, -1, -1):
            v = v * y + c[k]
        return v

    def deriv(self) -> "Poly":
        if self.c.size == 1:
            return Poly.zero()
        return Poly(self.c[1:] * np.arange(1, self.c.size))

    def shift(self, s: float) -> "Poly":
        """Coefficients of p(y + s) via Ruffini-Horner."""
        c = self.c.copy()
        n = c.size
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += s * c[j + 1]
        return Poly(c)

    def __add__(self, other):
        a, b = self.c, _coerce(other).c
        if a.size < b.size:
            a, b = b, a
        out = a.copy()
        out[: b.size] += b
        return Poly(out)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-self.c)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Poly(self.c * other)
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return Poly.zero()
        return Poly(np.convolve(self.c, other.c))

    __rmul__ = __mul__

    def __repr__(self):
        return f"Poly(deg={self.degree}, c={np.array2string(self.c, precision=4)})"


def _coerce(p) -> Poly:
    return p if isinstance(p, Poly) else Poly(p)


#: delta = 1 + y**2, the Cayley denominator.
DELTA = Poly([1.0, 0.0, 1.0])


def poly_mul(a: Poly, b: Poly) -> Poly:
    """Coefficient convolution product."""
    return _coerce(a) * _coerce(b)


def poly_derivative(a: Poly) -> Poly:
    """Power-rule derivative."""
    return _coerce(a).deriv()


def poly_exact_divide(a: Poly, d: Poly, div_eps: float = DIV_EPS):
    """Divide ``a`` by ``d`` where the division is exact by construction.

    Returns ``(quotient, rel_remainder)``.  Raises :class:`NotDivisible`
    when the remainder exceeds ``div_eps`` relative to ``max|a|`` -- that
    always means a bug upstream, never a data problem.
    """
    a, d = _coerce(a), _coerce(d)
    if d.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero:
        return Poly.zero(), 0.0
    r = a.c.copy()
    dc = d.c
    nd = dc.size - 1
    nq = r.size - dc.size
    if nq < 0:
        rel = float(np.max(np.abs(r)) / np.max(np.abs(a.c)))
        if rel > div_eps:
            raise NotDivisible(rel, div_eps)
        return Poly.zero(), rel
    q = np.zeros(nq + 1)
    for k in range(nq, -1, -1):
        q[k] = r[k + nd] / dc[nd]
        r[k : k + nd + 1] -= q[k] * dc
    rel = float(np.max(np.abs(r[:nd])) / np.max(np.abs(a.c))) if nd > 0 else 0.0
    if rel > div_eps:
        raise NotDivisible(rel, div_eps)
    return Poly(q), rel


# ---------------------------------------------------------------------------
# Sturm-sequence real root isolation (compiled kernels)
#
# The chain is built with each remainder renormalized to unit max
# coefficient, which keeps the classic coefficient blow-up in check.  A
# vanishing remainder (< 1e-13 of the normalized scale) indicates a
# nontrivial gcd of (p, p'); the driver then deflates p by that gcd and
# restarts, so multiple roots are reported once.  Roots with |y| <= 1 are
# isolated directly; roots with |y| > 1 are isolated as roots of the
# reversed polynomial in w = 1/y, keeping every evaluation inside [-1, 1].
# ---------------------------------------------------------------------------

GCD_EPS = 1e-13


@njit(cache=True)
def _horner(c, deg, x):
    v = c[deg]
    for i in range(deg - 1, -1, -1):
        v = v * x + c[i]
    return v


@njit(cache=True)
def _build_chain(c, n):
    """Sturm chain of a degree-n polynomial (max-normalized rows).

    Returns (chain, degs, rows).  If the last row has degree >= 1 the
    chain terminated on a ~zero remainder and that row is the gcd.
    """
    chain = np.zeros((n + 2, n + 1))
    degs = np.full(n + 2, -1, dtype=np.int64)
    chain[0, : n + 1] = c[: n + 1]
    degs[0] = n
    s = 0.0
    for k in range(1, n + 1):
        v = k * c[k]
        chain[1, k - 1] = v
        if abs(v) > s:
            s = abs(v)
    if s == 0.0:
        return chain, degs, 1
    for k in range(n):
        chain[1, k] /= s
    degs[1] = n - 1
    rows = 2
    while degs[rows - 1] > 0:
        da = degs[rows - 2]
        db = degs[rows - 1]
        r = np.zeros(n + 1)
        for k in range(da + 1):
            r[k] = chain[rows - 2, k]
        lead = chain[rows - 1, db]
        for k in range(da, db - 1, -1):
            q = r[k] / lead
            if q != 0.0:
                for j in range(db + 1):
                    r[k - db + j] -= q * chain[rows - 1, j]
            r[k] = 0.0
        mx = 0.0
        for k in range(db):
            if abs(r[k]) > mx:
                mx = abs(r[k])
        if mx < GCD_EPS:
            break  # previous row is (numerically) the gcd
        dr = 0
        for k in range(db - 1, -1, -1):
            if abs(r[k]) > 1e-12 * mx:
                dr = k
                break
        for k in range(dr + 1):
            chain[rows, k] = -r[k] / mx
        degs[rows] = dr
        rows += 1
    return chain, degs, rows


@njit(cache=True)
def _variations(chain, degs, rows, x):
    cnt = 0
    prev = 0.0
    for i in range(rows):
        v = _horner(chain[i], degs[i], x)
        if v != 0.0:
            if prev != 0.0 and (v > 0.0) != (prev > 0.0):
                cnt += 1
            prev = v
    return cnt


@njit(cache=True)
def _nonroot(chain, degs, x, lo, hi):
    """Nudge x inside (lo, hi) until p(x) != 0."""
    step = (hi - lo) * 1e-12
    for _ in range(64):
        if _horner(chain[0], degs[0], x) != 0.0:
            return x
        x += step
        step *= 2.0
    return x


@njit(cache=True)
def _refine_bracket(c, deg, a, b, refine_eps):
    """Sign-safe bisection of a bracketed simple root to width refine_eps."""
    fa = _horner(c, deg, a)
    for _ in range(128):
        if b - a <= refine_eps:
            break
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = _horner(c, deg, m)
        if fm == 0.0:
            return m
        if (fa > 0.0) == (fm > 0.0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


@njit(cache=True)
def _newton_polish(c, deg, x):
    fx = _horner(c, deg, x)
    dv = 0.0
    # derivative value by Horner on the fly
    for k in range(deg, 0, -1):
        dv = dv * x + k * c[k]
    if dv != 0.0:
        x1 = x - fx / dv
        if abs(_horner(c, deg, x1)) < abs(fx):
            return x1
    return x


@njit(cache=True)
def _isolate(chain, degs, rows, lo, hi, refine_eps, roots, nr):
    """Isolate and refine real roots of chain[0] inside (lo, hi]."""
    cap = 4 * (degs[0] + 4)
    a_st = np.empty(cap)
    b_st = np.empty(cap)
    va_st = np.empty(cap, dtype=np.int64)
    vb_st = np.empty(cap, dtype=np.int64)
    lo = _nonroot(chain, degs, lo, lo, hi)
    hi = _nonroot(chain, degs, hi, lo, hi)
    va = _variations(chain, degs, rows, lo)
    vb = _variations(chain, degs, rows, hi)
    if va - vb <= 0:
        return nr
    top = 0
    a_st[0], b_st[0], va_st[0], vb_st[0] = lo, hi, va, vb
    top = 1
    c = chain[0]
    deg = degs[0]
    while top > 0:
        top -= 1
        a, b, va, vb = a_st[top], b_st[top], va_st[top], vb_st[top]
        k = va - vb
        if k <= 0:
            continue
        if b - a <= refine_eps:
            # unresolvable cluster: report once at the midpoint
            roots[nr] = 0.5 * (a + b)
            nr += 1
            continue
        if k == 1:
            fa = _horner(c, deg, a)
            fb = _horner(c, deg, b)
            if (fa > 0.0) != (fb > 0.0):
                r = _refine_bracket(c, deg, a, b, refine_eps)
            else:
                # even-multiplicity root: bisect on the Sturm count
                aa, bb, vva = a, b, va
                while bb - aa > refine_eps:
                    m = _nonroot(chain, degs, 0.5 * (aa + bb), aa, bb)
                    if m <= aa or m >= bb:
                        break
                    vm = _variations(chain, degs, rows, m)
                    if vva - vm >= 1:
                        bb = m
                    else:
                        aa, vva = m, vm
                r = 0.5 * (aa + bb)
            roots[nr] = _newton_polish(c, deg, r)
            nr += 1
            continue
        m = _nonroot(chain, degs, 0.5 * (a + b), a, b)
        vm = _variations(chain, degs, rows, m)
        if top + 2 > cap:
            continue  # capacity guard; cannot trigger for deg <= 28
        a_st[top], b_st[top], va_st[top], vb_st[top] = a, m, va, vm
        top += 1
        a_st[top], b_st[top], va_st[top], vb_st[top] = m, b, vm, vb
        top += 1
    return nr


@njit(cache=True)
def _deflate_gcd(c, n):
    """Divide out gcd(p, p') detected by a collapsed Sturm chain."""
    for _ in range(n):
        chain, degs, rows = _build_chain(c, n)
        dg = degs[rows - 1]
        if dg <= 0:
            return c, n
        g = chain[rows - 1]
        nq = n - dg
        q = np.zeros(n + 1)
        r = c.copy()
        for k in range(nq, -1, -1):
            q[k] = r[k + dg] / g[dg]
            for j in range(dg + 1):
                r[k + j] -= q[k] * g[j]
        mx = 0.0
        for k in range(nq + 1):
            if abs(q[k]) > mx:
                mx = abs(q[k])
        if mx == 0.0:
            return c, n
        dn = 0
        for k in range(nq, -1, -1):
            if abs(q[k]) > 1e-12 * mx:
                dn = k
                break
        for k in range(n + 1):
            c[k] = q[k] / mx if k <= dn else 0.0
        n = dn
        if n < 1:
            return c, n
    return c, n


@njit(cache=True)
def _roots_kernel(c0, n, refine_eps):
    roots = np.empty(2 * n + 4)
    nr = 0
    c = c0.copy()
    c, n = _deflate_gcd(c, n)
    if n < 1:
        return roots[:0]
    # direct pass: roots in [-1, 1]
    chain, degs, rows = _build_chain(c, n)
    nr = _isolate(chain, degs, rows, -1.0 - 1e-9, 1.0 + 1e-9, refine_eps, roots, nr)
    # reversed pass: |y| > 1 as w = 1/y in (-1, 1)
    rev = np.zeros(n + 1)
    for k in range(n + 1):
        rev[k] = c[n - k]
    m = n
    while m > 0 and rev[m] == 0.0:
        m -= 1
    mx = 0.0
    for k in range(m + 1):
        if abs(rev[k]) > mx:
            mx = abs(rev[k])
    if m >= 1 and mx > 0.0:
        for k in range(m + 1):
            rev[k] /= mx
        rev, m = _deflate_gcd(rev, m)
        if m >= 1:
            chain2, degs2, rows2 = _build_chain(rev, m)
            wroots = np.empty(2 * m + 4)
            nw = _isolate(chain2, degs2, rows2, -1.0 + 1e-9, 1.0 - 1e-9,
                          refine_eps, wroots, 0)
            for i in range(nw):
                w = wroots[i]
                if abs(w) > 1e-14:
                    y = 1.0 / w
                    if abs(y) > 1.0:
                        roots[nr] = y
                        nr += 1
    out = roots[:nr]
    out.sort()
    return out


def sturm_real_roots(p: Poly, refine_eps: float = 1e-12) -> np.ndarray:
    """All real roots of ``p``, each bisected to width ``refine_eps``.

    Multiple roots are reported once.  Returns a sorted array (empty when
    there are no real roots).
    """
    p = _coerce(p)
    n = p.degree
    if n < 1:
        return np.empty(0)
    c = p.c / np.max(np.abs(p.c))
    roots = _roots_kernel(np.ascontiguousarray(c), n, float(refine_eps))
    if roots.size < 2:
        return roots
    # collapse near-duplicates straddling the |y| = 1 pass boundary
    keep = [roots[0]]
    for r in roots[1:]:
        if r - keep[-1] > max(4.0 * refine_eps, 1e-9 * (1.0 + abs(r))):
            keep.append(r)
    return np.asarray(keep)


# ---------------------------------------------------------------------------
# Polynomial matrices
# ---------------------------------------------------------------------------


class PolyMat:
    """Row-major grid of :class:`Poly` entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match shape")
        self.rows = rows
        self.cols = cols
        self.entries = [_coerce(e) for e in entries]

    @staticmethod
    def from_rows(rows_of_polys) -> "PolyMat":
        r = len(rows_of_polys)
        c = len(rows_of_polys[0])
        flat = [p for row in rows_of_polys for p in row]
        return PolyMat(r, c, flat)

    def __getitem__(self, ij) -> Poly:
        i, j = ij
        return self.entries[i * self.cols + j]

    def max_degree(self) -> int:
        return max(e.degree for e in self.entries)

    def eval(self, y: float) -> np.ndarray:
        """Numeric matrix at y."""
        out = np.empty((self.rows, self.cols))
        for i in range(self.rows):
            for j in range(self.cols):
                out[i, j] = self[i, j](y)
        return out

    def coefficient_matrices(self) -> list[np.ndarray]:
        """List [M_0, ..., M_d] with M_k the y**k coefficient matrix."""
        d = self.max_degree()
        out = [np.zeros((self.rows, self.cols)) for _ in range(max(d, 0) + 1)]
        for i in range(self.rows):
            for j in range(self.cols):
                c = self[i, j].c
                if self[i, j].is_zero:
                    continue
                for k in range(c.size):
                    out[k][i, j] = c[k]
        return out

    def shift(self, s: float) -> "PolyMat":
        return PolyMat(self.rows, self.cols, [e.shift(s) for e in self.entries])


def polymat_det(m: PolyMat) -> Poly:
    """Determinant by Laplace expansion along the sparsest row/column.

    Internally works on raw coefficient arrays (None marks a zero entry)
    so the 5x5 expansions stay cheap on the solver hot path.
    """
    if m.rows != m.cols:
        raise ValueError("determinant needs a square matrix")
    if m.rows > 5:
        raise ValueError("polymat_det supports size <= 5")
    grid = [
        [None if m[i, j].is_zero else m[i, j].c for j in range(m.cols)]
        for i in range(m.rows)
    ]
    d = _det_rec(grid)
    return Poly.zero() if d is None else Poly(d)


def _cadd(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if a.size < b.size:
        a, b = b, a
    out = a.copy()
    out[: b.size] += b
    return out


def _det_rec(g):
    """Determinant over coefficient arrays; None encodes the zero poly."""
    n = len(g)
    if n == 1:
        return g[0][0]
    if n == 2:
        ad = None if g[0][0] is None or g[1][1] is None else np.convolve(g[0][0], g[1][1])
        bc = None if g[0][1] is None or g[1][0] is None else np.convolve(g[0][1], g[1][0])
        return _cadd(ad, None if bc is None else -bc)
    # pick the line (row or column) with the most zero entries
    bi, bz, by_row = 0, -1, True
    for i in range(n):
        z = sum(g[i][j] is None for j in range(n))
        if z > bz:
            bi, bz, by_row = i, z, True
    for j in range(n):
        z = sum(g[i][j] is None for i in range(n))
        if z > bz:
            bi, bz, by_row = j, z, False
    acc = None
    for k in range(n):
        e = g[bi][k] if by_row else g[k][bi]
        if e is None:
            continue
        if by_row:
            sub = [[g[i][j] for j in range(n) if j != k] for i in range(n) if i != bi]
        else:
            sub = [[g[i][j] for j in range(n) if j != bi] for i in range(n) if i != k]
        minor = _det_rec(sub)
        if minor is None:
            continue
        term = np.convolve(e, minor)
        if (bi + k) % 2:
            term = -term
        acc = _cadd(acc, term)
    return acc


# ---------------------------------------------------------------------------
# Dense eigensolvers
# ---------------------------------------------------------------------------


@dataclass
class EigenResult:
    """Real eigenvalues (ascending); eigenvectors only for the symmetric path."""

    real_eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None  # columns match eigenvalues

    @property
    def eigenpairs(self):
        if self.eigenvectors is None:
            return None
        return [
            (float(self.real_eigenvalues[i]), self.eigenvectors[:, i])
            for i in range(self.real_eigenvalues.size)
        ]


# Imaginary parts below this (relative to the spectral scale) count as real.
REAL_EIG_EPS = 1e-8


def real_eigenvalues(m: np.ndarray) -> EigenResult:
    """Real eigenvalues of a dense real matrix (size <= 40)."""
    m = np.asarray(m, dtype=np.float64)
    if m.shape[0] != m.shape[1] or m.shape[0] > 40:
        raise ValueError("expected a square matrix of size <= 40")
    try:
        w = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise NumericalFailure(str(exc)) from exc
    if not np.all(np.isfinite(w.real)) or not np.all(np.isfinite(w.imag)):
        raise NumericalFailure("non-finite eigenvalues")
    scale = np.max(np.abs(w)) if w.size else 0.0
    real = w[np.abs(w.imag) <= REAL_EIG_EPS * max(scale, 1e-300)].real
    return EigenResult(np.sort(real))


def sym3_eigen(c: np.ndarray) -> EigenResult:
    """Eigendecomposition of a symmetric 3x3 matrix.

    Eigenvalues ascend; eigenvectors are orthonormal columns.
    """
    c = np.asarray(c, dtype=np.float64)
    scale = np.max(np.abs(c))
    if scale > 0 and np.max(np.abs(c - c.T)) > 1e-9 * scale:
        raise ValueError("matrix is not symmetric")
    w, v = np.linalg.eigh(0.5 * (c + c.T))
    return EigenResult(w, v)
