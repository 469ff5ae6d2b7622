"""Exact complex-symplectic matrices and pullbacks.

Matrices act on the variable vector z = (x_1 .. x_d, xi_1 .. xi_d); the
pullback of an element substitutes z -> Mz. The symplectic form J is not
hard-coded: it is computed once per dimension from the Poisson bracket on
the linear basis (J[k][l] = {z_k, z_l}), so the two modules cannot drift
apart. With this engine's bracket convention J = [[0, -I], [I, 0]].
"""

from __future__ import annotations

from .automorphism import AutomorphismData
from .elements import Context, WeylElement, MIN_TRUNC
from .errors import ContextError, NotConformalError, NotSymplecticError, SingularMatrixError
from .scalars import G_ONE, G_ZERO, GaussianRational, rational

_J_CACHE = {}


def symplectic_form(d):
    """J as a tuple of rows of GaussianRational, J[k][l] = {z_k, z_l}."""
    rows = _J_CACHE.get(d)
    if rows is None:
        from .star import poisson
        ctx = Context(d, MIN_TRUNC)
        zeros = (0,) * ctx.nvars
        basis = [WeylElement.variable(ctx, k) for k in range(ctx.nvars)]
        rows = tuple(
            tuple(poisson(zk, zl).coefficient(0, zeros) for zl in basis)
            for zk in basis)
        _J_CACHE[d] = rows
    return rows


def _coerce_entry(v):
    return v if isinstance(v, GaussianRational) else GaussianRational(v)


class SympMatrix:
    """Square 2d x 2d matrix over the Gaussian rationals, invertible.

    Invertibility is established at construction by exact Gauss-Jordan
    elimination (which also yields the cached inverse); a singular input
    raises SingularMatrixError.
    """

    __slots__ = ("dim", "rows", "_inv")

    def __init__(self, rows):
        rows = tuple(tuple(_coerce_entry(v) for v in row) for row in rows)
        n = len(rows)
        if n == 0 or n % 2 or any(len(r) != n for r in rows):
            raise ContextError("matrix must be square of even size 2d")
        object.__setattr__(self, "dim", n // 2)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_inv", _invert(rows))

    def __setattr__(self, name, value):
        raise AttributeError("SympMatrix is immutable")

    @classmethod
    def identity(cls, d):
        n = 2 * d
        return cls(tuple(
            tuple(G_ONE if i == j else G_ZERO for j in range(n))
            for i in range(n)))

    def inverse(self):
        return SympMatrix(self._inv)

    def transpose(self):
        return SympMatrix(tuple(zip(*self.rows)))

    def __matmul__(self, other):
        if not isinstance(other, SympMatrix):
            return NotImplemented
        if self.dim != other.dim:
            raise ContextError("matrix dimension mismatch")
        cols = tuple(zip(*other.rows))
        return SympMatrix(tuple(
            tuple(_dot(row, col) for col in cols) for row in self.rows))

    def __eq__(self, other):
        if not isinstance(other, SympMatrix):
            return NotImplemented
        return self.rows == other.rows

    __hash__ = None

    def is_identity(self):
        return all(
            self.rows[i][j] == (G_ONE if i == j else G_ZERO)
            for i in range(2 * self.dim) for j in range(2 * self.dim))

    def __repr__(self):
        body = "; ".join(
            " ".join(str(v) for v in row) for row in self.rows)
        return f"<SympMatrix d={self.dim} [{body}]>"


def _dot(row, col):
    acc = G_ZERO
    for a, b in zip(row, col):
        acc = acc + a * b
    return acc


def _invert(rows):
    """Exact Gauss-Jordan; returns inverse rows or raises SingularMatrixError."""
    n = len(rows)
    a = [list(r) for r in rows]
    inv = [[G_ONE if i == j else G_ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not a[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col].inverse()
        a[col] = [v * p for v in a[col]]
        inv[col] = [v * p for v in inv[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if f.is_zero():
                continue
            a[r] = [v - f * w for v, w in zip(a[r], a[col])]
            inv[r] = [v - f * w for v, w in zip(inv[r], inv[col])]
    return tuple(tuple(r) for r in inv)


def _form_product(m):
    """M^T J M as plain nested tuples."""
    j = symplectic_form(m.dim)
    n = 2 * m.dim
    jm = tuple(
        tuple(_dot(j[r], tuple(m.rows[k][c] for k in range(n))) for c in range(n))
        for r in range(n))
    return tuple(
        tuple(_dot(tuple(m.rows[k][r] for k in range(n)), tuple(jm[k][c] for k in range(n)))
              for c in range(n))
        for r in range(n))


def is_symplectic(m):
    """M^T J M = J, exactly."""
    return _form_product(m) == symplectic_form(m.dim)


def conformal_factor(m):
    """The scalar c with M^T J M = c J; NotConformalError if there is none."""
    p = _form_product(m)
    j = symplectic_form(m.dim)
    c = None
    n = 2 * m.dim
    for r in range(n):
        for s in range(n):
            if not j[r][s].is_zero():
                c = p[r][s] / j[r][s]
                break
        if c is not None:
            break
    for r in range(n):
        for s in range(n):
            if p[r][s] != c * j[r][s]:
                raise NotConformalError("M^T J M is not proportional to J")
    return c


def _linear_forms(m, ctx):
    """(Mz)_k as elements: row k of M contracted with the variable vector."""
    n = ctx.nvars
    if 2 * m.dim != n:
        raise ContextError(
            f"matrix is for dim {m.dim}, context has dim {ctx.dim}")
    forms = []
    for k in range(n):
        e = WeylElement.zero(ctx)
        for l in range(n):
            v = m.rows[k][l]
            if not v.is_zero():
                e = e + WeylElement.variable(ctx, l).scale(v)
        forms.append(e)
    return forms


def pullback(m, a):
    """a composed with the linear map z -> Mz. Requires only invertibility."""
    ctx = a.ctx
    forms = _linear_forms(m, ctx)
    n = ctx.nvars
    # powers of each linear form, built on demand
    pows = [[WeylElement.one(ctx), forms[k]] for k in range(n)]

    def power(k, t):
        lst = pows[k]
        while len(lst) <= t:
            lst.append(lst[-1] * forms[k])
        return lst[t]

    acc = {}
    for (h, e), (re, im) in a._raw.items():
        prod = None
        for k, ek in enumerate(e):
            if ek:
                pk = power(k, ek)
                prod = pk if prod is None else prod * pk
        if prod is None:
            _merge(acc, h, ((0, (0,) * n), (re, im)))
            continue
        for key, (r2, i2) in prod._raw.items():
            _merge(acc, h, (key, (re * r2 - im * i2, re * i2 + im * r2)))
    trunc = ctx.trunc
    out = {}
    for (h, e), (re, im) in acc.items():
        if (re or im) and 2 * h + sum(e) <= trunc:
            out[(h, e)] = (re, im)
    return WeylElement._from_raw(ctx, out)


def _merge(acc, hshift, item):
    (h, e), (re, im) = item
    key = (h + hshift, e)
    cur = acc.get(key)
    if cur is None:
        acc[key] = (re, im)
    else:
        acc[key] = (cur[0] + re, cur[1] + im)


def pullback_automorphism(m, ctx):
    """The automorphism z_k -> (Mz)_k; M must be symplectic."""
    if not is_symplectic(m):
        raise NotSymplecticError("pullback automorphism needs M^T J M = J")
    return AutomorphismData(ctx, _linear_forms(m, ctx), G_ONE)


# deterministic random generation

def _random_nonzero_rational(rng, max_num=3, max_den=3):
    num = rng.choice([n for n in range(-max_num, max_num + 1) if n])
    den = rng.randint(1, max_den)
    return rational(num, den)


def _random_parameter(rng, complex_entries):
    re = _random_nonzero_rational(rng)
    if complex_entries and rng.random() < 0.5:
        return GaussianRational(re, _random_nonzero_rational(rng))
    return GaussianRational(re)


def _transvection(d, v, t):
    """I + t * outer(v, Jv): z -> z + t * omega(z, v) v, symplectic for any v, t."""
    j = symplectic_form(d)
    n = 2 * d
    jv = [_dot(j[r], v) for r in range(n)]
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            base = G_ONE if r == c else G_ZERO
            row.append(base + t * v[r] * jv[c])
        rows.append(tuple(row))
    return SympMatrix(rows)


def _pair_swap(d, p):
    """x_p -> xi_p, xi_p -> -x_p, identity elsewhere."""
    n = 2 * d
    rows = [[G_ONE if r == c else G_ZERO for c in range(n)] for r in range(n)]
    rows[p][p] = G_ZERO
    rows[p][d + p] = G_ONE
    rows[d + p][d + p] = G_ZERO
    rows[d + p][p] = GaussianRational(-1)
    return SympMatrix(rows)


def random_symplectic_rng(rng, d, steps, complex_entries=False):
    """Product of `steps` random symplectic shears and signed pair swaps."""
    m = SympMatrix.identity(d)
    n = 2 * d
    for _ in range(steps):
        if rng.random() < 0.2:
            g = _pair_swap(d, rng.randrange(d))
        else:
            support = rng.sample(range(n), rng.choice([1, 1, 2]) if n > 1 else 1)
            v = [G_ZERO] * n
            for idx in support:
                v[idx] = GaussianRational(rng.choice([-1, 1]))
            g = _transvection(d, tuple(v), _random_parameter(rng, complex_entries))
        m = g @ m
    return m


def random_symplectic(d, seed, steps=8, complex_entries=False):
    """Deterministic-in-seed random element of Sp(2d)."""
    import random as _random
    return random_symplectic_rng(_random.Random(seed), d, steps, complex_entries)
