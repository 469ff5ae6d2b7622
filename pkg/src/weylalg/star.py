"""Star product and brackets.

The star product is the Moyal product

    a * b = sum_j (1/j!) (hbar/2i)^j a P^j b,

with P = sum_p (left d_xi_p right d_x_p - left d_x_p right d_xi_p). The
Poisson bracket convention is pinned to match the j = 1 term:

    {a, b} = sum_p (d_xi_p a * d_x_p b  -  d_x_p a * d_xi_p b),

so {xi_p, x_p} = 1 and the commutator of linear generators is
[z_k, z_l] = (hbar/i) {z_k, z_l}.

The scaled bracket (i/hbar)[a, b] lowers grade by two, so unlike the star
product it is not well defined on the truncated quotient; it is computed
here with an internal cutoff two grades above the result truncation, which
makes it exact whenever the inputs are exactly known polynomials (the only
way the engine uses it). Its operands may therefore carry different
truncations; the result uses the smaller one.

P^j is expanded per term pair by multinomial enumeration over the 2d
derivative directions; each surviving combination contributes

    (-1)^{|l|} (-i/2)^{|k|+|l|} / (k! l!) *
    ff(a_xi, k) ff(b_x, k) ff(a_x, l) ff(b_xi, l)

with ff the falling factorial, j = |k|+|l| added to the hbar power, and
k+l subtracted from both paired exponents. All grade-(m+n) terms of a
grade-m times grade-n product coincide, so truncation prunes whole term
pairs, never single combinations.
"""

from __future__ import annotations

from itertools import product as _iproduct

from .elements import Context, WeylElement, _require_same_ctx, _require_same_dim
from .errors import InternalError
from .scalars import QONE, QZERO, _Q

_TWO = _Q(2)

# (-i/2)^j as (re, im) pairs, extended on demand
_IHALF = [(QONE, QZERO)]


def _ihalf(j):
    while len(_IHALF) <= j:
        n = len(_IHALF)
        half = QONE / (_TWO ** n)
        m = n % 4
        if m == 0:
            _IHALF.append((half, QZERO))
        elif m == 1:
            _IHALF.append((QZERO, -half))
        elif m == 2:
            _IHALF.append((-half, QZERO))
        else:
            _IHALF.append((QZERO, half))
    return _IHALF[j]


_FACT = [1, 1, 2, 6, 24, 120, 720, 5040, 40320]


def _fact(n):
    while len(_FACT) <= n:
        _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[n]


def _ff(n, k):
    f = 1
    for t in range(k):
        f *= n - t
    return f


def _acc_add(acc, key, re, im):
    cur = acc.get(key)
    if cur is None:
        acc[key] = (re, im)
    else:
        acc[key] = (cur[0] + re, cur[1] + im)


def _moyal_raw(buckets_a, buckets_b, d, cutoff):
    """Star product of bucketed raw term maps, keeping grades <= cutoff."""
    acc = {}
    for ga, items_a in buckets_a.items():
        for gb, items_b in buckets_b.items():
            if ga + gb > cutoff:
                continue
            for (h1, e1), (re1, im1) in items_a:
                left_linear = ga == 1 and h1 == 0
                if left_linear:
                    k = e1.index(1)
                for (h2, e2), (re2, im2) in items_b:
                    pre = re1 * re2 - im1 * im2
                    pim = re1 * im2 + im1 * re2
                    if left_linear:
                        _linear_pair(acc, d, k, h2, e2, pre, pim)
                    else:
                        _general_pair(acc, d, h1, e1, h2, e2, pre, pim)
    return {k: v for k, v in acc.items() if v[0] or v[1]}


def _linear_pair(acc, d, k, h2, e2, pre, pim):
    # left factor is the bare variable z_k: only j = 0 and j = 1 survive
    ek = e2[k]
    key = (h2, e2[:k] + (ek + 1,) + e2[k + 1:])
    _acc_add(acc, key, pre, pim)
    if k < d:
        # x_p * b: j=1 term is -(hbar/2i) d_xi_p b
        q = k + d
        n = e2[q]
        if n:
            key = (h2 + 1, e2[:q] + (n - 1,) + e2[q + 1:])
            half = _Q(n, 2)
            # times +i/2 * n
            _acc_add(acc, key, -pim * half, pre * half)
    else:
        # xi_p * b: j=1 term is +(hbar/2i) d_x_p b
        q = k - d
        n = e2[q]
        if n:
            key = (h2 + 1, e2[:q] + (n - 1,) + e2[q + 1:])
            half = _Q(n, 2)
            # times -i/2 * n
            _acc_add(acc, key, pim * half, -pre * half)


def _general_pair(acc, d, h1, e1, h2, e2, pre, pim):
    base = tuple(map(int.__add__, e1, e2))
    _acc_add(acc, (h1 + h2, base), pre, pim)

    active = []
    for p in range(d):
        kmax = e1[d + p] if e1[d + p] < e2[p] else e2[p]
        lmax = e1[p] if e1[p] < e2[d + p] else e2[d + p]
        if kmax or lmax:
            active.append((p, kmax, lmax))
    if not active:
        return

    # per dimension: (jp, denominator kp! lp!, dimension, signed numerator)
    # with jp = kp + lp, which is also the drop on both paired exponents
    lists = []
    for p, kmax, lmax in active:
        a_x, a_xi = e1[p], e1[d + p]
        b_x, b_xi = e2[p], e2[d + p]
        lst = []
        for kp in range(kmax + 1):
            fk = _ff(a_xi, kp) * _ff(b_x, kp)
            for lp in range(lmax + 1):
                num = fk * _ff(a_x, lp) * _ff(b_xi, lp)
                if lp & 1:
                    num = -num
                lst.append((kp + lp, _fact(kp) * _fact(lp), p, num))
        lists.append(lst)

    hbase = h1 + h2
    if len(lists) == 1:
        for jp, den, p, num in lists[0]:
            if not jp:
                continue
            tre, tim = _ihalf(jp)
            q = _Q(num, den) if den != 1 else num
            es = list(base)
            es[p] -= jp
            es[d + p] -= jp
            key = (hbase + jp, tuple(es))
            _acc_add(acc, key, (pre * tre - pim * tim) * q,
                     (pre * tim + pim * tre) * q)
    else:
        for combo in _iproduct(*lists):
            j = 0
            num = 1
            den = 1
            for jp, dn, _p, nm in combo:
                if jp:
                    j += jp
                    num *= nm
                    den *= dn
            if not j:
                continue
            tre, tim = _ihalf(j)
            q = _Q(num, den) if den != 1 else num
            es = list(base)
            for jp, _dn, p, _nm in combo:
                if jp:
                    es[p] -= jp
                    es[d + p] -= jp
            key = (hbase + j, tuple(es))
            _acc_add(acc, key, (pre * tre - pim * tim) * q,
                     (pre * tim + pim * tre) * q)


def moyal(a, b):
    """Star product in the shared context."""
    _require_same_ctx(a, b)
    raw = _moyal_raw(a._buckets(), b._buckets(), a.ctx.dim, a.ctx.trunc)
    return WeylElement._from_raw(a.ctx, raw)


def poisson(a, b):
    """Poisson bracket, {xi_p, x_p} = 1 convention."""
    _require_same_ctx(a, b)
    d = a.ctx.dim
    out = WeylElement.zero(a.ctx)
    for p in range(d):
        out = out + a.partial(d + p) * b.partial(p) - a.partial(p) * b.partial(d + p)
    return out


def commutator(a, b):
    """Star commutator a * b - b * a."""
    _require_same_ctx(a, b)
    d = a.ctx.dim
    cutoff = a.ctx.trunc
    raw = _moyal_raw(a._buckets(), b._buckets(), d, cutoff)
    back = _moyal_raw(b._buckets(), a._buckets(), d, cutoff)
    for k, (re, im) in back.items():
        _acc_add(raw, k, -re, -im)
    return WeylElement._from_raw(
        a.ctx, {k: v for k, v in raw.items() if v[0] or v[1]})


def scaled_bracket(a, b):
    """(i/hbar)[a, b]: exact, grade m+n-2, result trunc = min of operands."""
    _require_same_dim(a, b)
    d = a.ctx.dim
    trunc = min(a.ctx.trunc, b.ctx.trunc)
    cutoff = trunc + 2  # the bracket peeks two grades above the quotient
    raw = _moyal_raw(a._buckets(), b._buckets(), d, cutoff)
    back = _moyal_raw(b._buckets(), a._buckets(), d, cutoff)
    for k, (re, im) in back.items():
        _acc_add(raw, k, -re, -im)
    out = {}
    for (h, e), (re, im) in raw.items():
        if not (re or im):
            continue
        if h == 0:
            raise InternalError(
                "commutator produced a term without an hbar factor; "
                "star-product kernel is broken")
        # multiply by i and divide one power of hbar
        out[(h - 1, e)] = (-im, re)
    ctx = a.ctx if a.ctx.trunc == trunc else b.ctx
    if ctx.trunc != trunc:
        ctx = Context(d, trunc)
    return WeylElement._from_raw(ctx, out)
