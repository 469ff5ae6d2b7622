"""Grading-preserving automorphisms and derivations of the truncated algebra.

An automorphism is stored by its action on generators: images of the 2d
variables plus a scalar c with hbar -> c*hbar. Images must lie in the ideal
of positive grade so the map preserves the grading filtration.

Applying the map to a monomial uses the recursion

    z^alpha = z_k * (star) z^beta - (hbar/2i) {z_k, z^beta}

with k the smallest index present in alpha; both pieces have images already
known by induction. Results are memoized per exponent tuple, so repeated
applications (composition, logarithms, verification sweeps) stay cheap.

Derivations use the same recursion with the Leibniz rule in place of
multiplicativity. exp/log convert between derivations with images in X_2
and automorphisms with identity linear part; both series terminate exactly
because each step raises the lowest grade.
"""

from __future__ import annotations

from .elements import Context, WeylElement, monomials_of_grade
from .errors import (
    AutomorphismError,
    ContextError,
    InnerGeneratorError,
    InternalError,
    InvalidImageError,
    KernelPreconditionError,
)
from .scalars import _Q, G_ONE, GaussianRational, QONE, QZERO
from .star import _moyal_raw, commutator, moyal, poisson, scaled_bracket

_FACT_Q = [_Q(1)]


def _inv_factorial(n):
    while len(_FACT_Q) <= n:
        _FACT_Q.append(_FACT_Q[-1] * len(_FACT_Q))
    return QONE / _FACT_Q[n]


def _bucket(raw):
    out = {}
    for key, val in raw.items():
        g = 2 * key[0] + sum(key[1])
        out.setdefault(g, []).append((key, val))
    return out


def _add_into(acc, key, re, im):
    cur = acc.get(key)
    if cur is None:
        acc[key] = (re, im)
    else:
        acc[key] = (cur[0] + re, cur[1] + im)


def _check_images(ctx, images, cls):
    if len(images) != ctx.nvars:
        raise cls(f"need {ctx.nvars} generator images, got {len(images)}")
    for k, im in enumerate(images):
        if not isinstance(im, WeylElement):
            raise cls(f"image of {ctx.variable_name(k)} is not an element")
        if im.ctx != ctx:
            raise ContextError(
                f"image of {ctx.variable_name(k)} lives in {im.ctx}, expected {ctx}")
        lg = im.lowest_grade()
        if lg is not None and lg < 1:
            raise cls(
                f"image of {ctx.variable_name(k)} has a grade-0 term; "
                "images must lie in the positive-grade ideal")


class AutomorphismData:
    """Generator images plus the hbar scale factor; apply() is memoized."""

    __slots__ = ("ctx", "images", "hbar_scale", "_memo", "_hpows")

    def __init__(self, ctx, images, hbar_scale=G_ONE):
        if not isinstance(ctx, Context):
            raise ContextError("first argument must be a Context")
        c = hbar_scale if isinstance(hbar_scale, GaussianRational) \
            else GaussianRational(hbar_scale)
        if c.is_zero():
            raise AutomorphismError("hbar scale factor must be nonzero")
        images = tuple(images)
        _check_images(ctx, images, InvalidImageError)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "hbar_scale", c)
        object.__setattr__(self, "_memo", {})
        object.__setattr__(self, "_hpows", [(QONE, QZERO), (c.re, c.im)])

    def __setattr__(self, name, value):
        raise AttributeError("AutomorphismData is immutable")

    def _scale_pow(self, h):
        lst = self._hpows
        while len(lst) <= h:
            pre, pim = lst[-1]
            c = self.hbar_scale
            lst.append((pre * c.re - pim * c.im, pre * c.im + pim * c.re))
        return lst[h]

    def _image_buckets(self, e):
        """Buckets of the image of the plain monomial z^e."""
        memo = self._memo
        b = memo.get(e)
        if b is not None:
            return b
        ctx = self.ctx
        deg = sum(e)
        if deg == 0:
            b = {0: [((0, e), (QONE, QZERO))]}
            memo[e] = b
            return b
        if deg == 1:
            b = self.images[e.index(1)]._buckets()
            memo[e] = b
            return b
        k = next(i for i, v in enumerate(e) if v)
        beta = list(e)
        beta[k] -= 1
        beta = tuple(beta)
        d = ctx.dim
        raw = _moyal_raw(
            self.images[k]._buckets(), self._image_buckets(beta), d, ctx.trunc)
        # bracket correction: z^alpha = z_k star z^beta - (hbar/2i){z_k, z^beta}
        if k < d:
            q, sim_sign = d + k, -1
        else:
            q, sim_sign = k - d, 1
        n = beta[q]
        if n:
            gamma = list(beta)
            gamma[q] -= 1
            c = self.hbar_scale
            # coefficient s*n*(i/2)*c where s = -1 for x pivots, +1 for xi
            w = _Q(sim_sign * n, 2)
            cre, cim = -w * c.im, w * c.re
            trunc = ctx.trunc
            for g, items in self._image_buckets(tuple(gamma)).items():
                if g + 2 > trunc:
                    continue
                for (h, ee), (re, im) in items:
                    _add_into(raw, (h + 1, ee),
                              re * cre - im * cim, re * cim + im * cre)
        b = _bucket({k2: v for k2, v in raw.items() if v[0] or v[1]})
        memo[e] = b
        return b

    def apply(self, a):
        if a.ctx != self.ctx:
            raise ContextError(f"element context {a.ctx} != automorphism context {self.ctx}")
        trunc = self.ctx.trunc
        acc = {}
        for (h, e), (re, im) in a._raw.items():
            if h:
                pre, pim = self._scale_pow(h)
                sre = re * pre - im * pim
                sim = re * pim + im * pre
            else:
                sre, sim = re, im
            shift = 2 * h
            for g, items in self._image_buckets(e).items():
                if g + shift > trunc:
                    continue
                for (h2, e2), (r2, i2) in items:
                    _add_into(acc, (h2 + h, e2),
                              sre * r2 - sim * i2, sre * i2 + sim * r2)
        return WeylElement._from_raw(
            self.ctx, {k: v for k, v in acc.items() if v[0] or v[1]})

    def __call__(self, a):
        return self.apply(a)

    def __repr__(self):
        ims = ", ".join(
            f"{self.ctx.variable_name(k)} -> {im}"
            for k, im in enumerate(self.images))
        return f"<Automorphism {self.ctx} c={self.hbar_scale} [{ims}]>"


def apply(phi, a):
    return phi.apply(a)


def identity_automorphism(ctx):
    return AutomorphismData(
        ctx, [WeylElement.variable(ctx, k) for k in range(ctx.nvars)], G_ONE)


def linear_part(phi):
    """Rows of the matrix of the grade-1 component of the generator images.

    Plain nested tuples of GaussianRational; no invertibility or
    symplecticity is implied or checked here.
    """
    ctx = phi.ctx
    n = ctx.nvars
    rows = []
    for k in range(n):
        row = []
        for l in range(n):
            exps = tuple(1 if i == l else 0 for i in range(n))
            row.append(phi.images[k].coefficient(0, exps))
        rows.append(tuple(row))
    return tuple(rows)


def compose(phi, psi):
    """The automorphism a -> phi(psi(a))."""
    if phi.ctx != psi.ctx:
        raise ContextError("cannot compose automorphisms over different contexts")
    return AutomorphismData(
        phi.ctx,
        [phi.apply(im) for im in psi.images],
        phi.hbar_scale * psi.hbar_scale)


class MorphismReport:
    """Outcome of verify_morphism; truthy iff every check passed."""

    __slots__ = ("passed", "failures", "pairs_checked")

    def __init__(self, passed, failures, pairs_checked):
        self.passed = passed
        self.failures = failures
        self.pairs_checked = pairs_checked

    def __bool__(self):
        return self.passed

    def __repr__(self):
        if self.passed:
            return f"<MorphismReport ok, {self.pairs_checked} pairs>"
        kind, detail = self.failures[0]
        return (f"<MorphismReport FAILED {kind} {detail}, "
                f"{len(self.failures)} failure(s)>")


def verify_morphism(phi, max_grade, max_failures=5):
    """Check star-multiplicativity of phi on basis monomials.

    Tests the canonical commutation relations on generator pairs, then
    phi(u star v) == phi(u) star phi(v) for all basis monomials u, v with
    grade(u) + grade(v) <= max_grade. Exhaustive over that range, so on a
    true morphism this is a proof up to the stated grade.
    """
    ctx = phi.ctx
    if not 0 <= max_grade <= ctx.trunc:
        raise ContextError("max_grade must lie between 0 and the truncation order")
    n = ctx.nvars
    failures = []
    # generator relations: [G_k, G_l] = c * (hbar/i) {z_k, z_l}
    zs = [WeylElement.variable(ctx, k) for k in range(n)]
    zeros = (0,) * n
    c = phi.hbar_scale
    for k in range(n):
        for l in range(k + 1, n):
            jkl = poisson(zs[k], zs[l]).coefficient(0, zeros)
            want_scalar = GaussianRational(0, -1) * c * jkl  # (1/i) = -i
            want = WeylElement.zero(ctx) if want_scalar.is_zero() else \
                WeylElement.monomial(ctx, 1, zeros, want_scalar)
            got = commutator(phi.images[k], phi.images[l])
            if got != want:
                failures.append(("relation", (k, l)))
                if len(failures) >= max_failures:
                    return MorphismReport(False, failures, 0)
    keys = []
    for g in range(0, max_grade + 1):
        keys.extend((g, key) for key in monomials_of_grade(ctx, g))
    pairs = 0
    for gu, (hu, eu) in keys:
        u = WeylElement.monomial(ctx, hu, eu)
        fu = phi.apply(u)
        for gv, (hv, ev) in keys:
            if gu + gv > max_grade:
                continue
            v = WeylElement.monomial(ctx, hv, ev)
            pairs += 1
            if phi.apply(moyal(u, v)) != moyal(fu, phi.apply(v)):
                failures.append(("product", ((hu, eu), (hv, ev))))
                if len(failures) >= max_failures:
                    return MorphismReport(False, failures, pairs)
    return MorphismReport(not failures, failures, pairs)


def is_real(phi):
    """True if every image has real coefficients on all hbar-free terms.

    Terms carrying hbar may be imaginary: the reality convention pairs each
    factor of hbar with a factor of i.
    """
    for im in phi.images:
        for (h, _e), (_re, c_im) in im._raw.items():
            if h == 0 and c_im:
                return False
    return True


def inner_automorphism(s, ctx=None):
    """exp((i/hbar) ad_S) as an automorphism of the target context.

    S must lie in X_3 (every term of grade >= 3); it may be truncated one
    order above the target so grade-(N+1) generator terms act on grade-1
    variables without loss. hbar is fixed (scale 1).
    """
    if ctx is None:
        ctx = s.ctx
    if s.ctx.dim != ctx.dim:
        raise ContextError("generator dimension differs from target context")
    lg = s.lowest_grade()
    if lg is not None and lg < 3:
        raise InnerGeneratorError(
            f"inner generator has a term of grade {lg}; all terms must have grade >= 3")
    images = []
    for k in range(ctx.nvars):
        cur = WeylElement.variable(ctx, k)
        total = cur
        m = 0
        while not cur.is_zero():
            m += 1
            if m > ctx.trunc + 2:
                raise InternalError("inner automorphism series failed to terminate")
            cur = scaled_bracket(s, cur)
            total = total + cur.scale(_inv_factorial(m))
        images.append(total)
    return AutomorphismData(ctx, images, G_ONE)


class DerivationData:
    """A derivation of the truncated algebra, stored by generator images.

    Linear, kills hbar, and satisfies the Leibniz rule over the star
    product. Images must lie in the positive-grade ideal.
    """

    __slots__ = ("ctx", "images", "_memo")

    def __init__(self, ctx, images):
        if not isinstance(ctx, Context):
            raise ContextError("first argument must be a Context")
        images = tuple(images)
        _check_images(ctx, images, InvalidImageError)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_memo", {})

    def __setattr__(self, name, value):
        raise AttributeError("DerivationData is immutable")

    def _image_buckets(self, e):
        memo = self._memo
        b = memo.get(e)
        if b is not None:
            return b
        ctx = self.ctx
        deg = sum(e)
        if deg == 0:
            b = {}
            memo[e] = b
            return b
        if deg == 1:
            b = self.images[e.index(1)]._buckets()
            memo[e] = b
            return b
        k = next(i for i, v in enumerate(e) if v)
        beta = list(e)
        beta[k] -= 1
        beta = tuple(beta)
        d = ctx.dim
        trunc = ctx.trunc
        zk_bucket = {1: [((0, tuple(1 if i == k else 0 for i in range(2 * d))),
                          (QONE, QZERO))]}
        beta_bucket = {sum(beta): [((0, beta), (QONE, QZERO))]}
        # Leibniz on z^alpha = z_k star z^beta - (hbar/2i){z_k, z^beta}
        raw = _moyal_raw(self.images[k]._buckets(), beta_bucket, d, trunc)
        for key, (re, im) in _moyal_raw(
                zk_bucket, self._image_buckets(beta), d, trunc).items():
            _add_into(raw, key, re, im)
        if k < d:
            q, sim_sign = d + k, -1
        else:
            q, sim_sign = k - d, 1
        n = beta[q]
        if n:
            gamma = list(beta)
            gamma[q] -= 1
            w = _Q(sim_sign * n, 2)
            for g, items in self._image_buckets(tuple(gamma)).items():
                if g + 2 > trunc:
                    continue
                for (h, ee), (re, im) in items:
                    # multiply by i*w, shift one power of hbar
                    _add_into(raw, (h + 1, ee), -im * w, re * w)
        b = _bucket({k2: v for k2, v in raw.items() if v[0] or v[1]})
        memo[e] = b
        return b

    def apply(self, a):
        if a.ctx != self.ctx:
            raise ContextError(f"element context {a.ctx} != derivation context {self.ctx}")
        trunc = self.ctx.trunc
        acc = {}
        for (h, e), (re, im) in a._raw.items():
            shift = 2 * h
            for g, items in self._image_buckets(e).items():
                if g + shift > trunc:
                    continue
                for (h2, e2), (r2, i2) in items:
                    _add_into(acc, (h2 + h, e2),
                              re * r2 - im * i2, re * i2 + im * r2)
        return WeylElement._from_raw(
            self.ctx, {k: v for k, v in acc.items() if v[0] or v[1]})

    def __call__(self, a):
        return self.apply(a)

    def __repr__(self):
        ims = ", ".join(
            f"{self.ctx.variable_name(k)} -> {im}"
            for k, im in enumerate(self.images))
        return f"<Derivation {self.ctx} [{ims}]>"


def derivation_apply(dv, a):
    return dv.apply(a)


def _require_kernel_images(ctx, images, what):
    for k, im in enumerate(images):
        lg = im.lowest_grade()
        if lg is not None and lg < 2:
            raise KernelPreconditionError(
                f"{what}: image of {ctx.variable_name(k)} has a grade-{lg} term; "
                "all terms must have grade >= 2")


def exp_derivation(dv):
    """exp(D) as an automorphism; D's images must lie in X_2.

    The grade-raising hypothesis makes the exponential series finite.
    """
    ctx = dv.ctx
    _require_kernel_images(ctx, dv.images, "exp")
    images = []
    for k in range(ctx.nvars):
        cur = WeylElement.variable(ctx, k)
        total = cur
        m = 0
        while not cur.is_zero():
            m += 1
            if m > ctx.trunc + 2:
                raise InternalError("derivation exponential failed to terminate")
            cur = dv.apply(cur)
            total = total + cur.scale(_inv_factorial(m))
        images.append(total)
    return AutomorphismData(ctx, images, G_ONE)


def log_automorphism(phi):
    """log of an automorphism with identity linear part and fixed hbar.

    Returns the DerivationData with D = sum_m (-1)^(m+1) (phi - id)^m / m
    on each generator; the series is finite because phi - id raises grade.
    """
    ctx = phi.ctx
    if not phi.hbar_scale.is_one():
        raise KernelPreconditionError("log requires hbar scale 1")
    n = ctx.nvars
    for k in range(n):
        diff = phi.images[k] - WeylElement.variable(ctx, k)
        lg = diff.lowest_grade()
        if lg is not None and lg < 2:
            raise KernelPreconditionError(
                "log requires identity linear part; image of "
                f"{ctx.variable_name(k)} differs at grade {lg}")
    images = []
    for k in range(n):
        cur = phi.images[k] - WeylElement.variable(ctx, k)
        total = WeylElement.zero(ctx)
        m = 0
        while not cur.is_zero():
            m += 1
            if m > ctx.trunc + 2:
                raise InternalError("automorphism logarithm failed to terminate")
            total = total + cur.scale(_Q(-1 if m % 2 == 0 else 1, m))
            cur = phi.apply(cur) - cur
        images.append(total)
    return DerivationData(ctx, images)
