"""Factoring a grading-preserving automorphism into linear x inner parts.

Any automorphism that fixes hbar and preserves the grading splits as

    phi = pullback(M) o inner(S)

with M the (necessarily symplectic) linear part and S a generator in X_3,
determined up to truncation. The constructive direction implemented here:

  1. read off M from the grade-1 part of the images and invert it,
  2. peel it off: psi = pullback(M^-1) o phi has identity linear part,
  3. take D = log(psi), a derivation with images in X_2,
  4. check the defining integrability conditions and integrate D to S
     by the radial (Euler) formula, one extra grade of truncation,
  5. recompose and compare against phi term by term.

Each step is exact; the final comparison either certifies the answer on
every generator or pinpoints the first failing grade.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automorphism import (
    AutomorphismData,
    compose,
    inner_automorphism,
    linear_part,
    log_automorphism,
)
from .elements import WeylElement
from .errors import (
    ClosednessError,
    HbarScaleError,
    InvalidImageError,
    LinearPartNotInvertibleError,
    LinearPartNotSymplecticError,
    ResidualMismatchError,
    SingularMatrixError,
)
from .scalars import _Q, G_ONE
from .symplectic import SympMatrix, _linear_forms, is_symplectic, pullback_automorphism


def dual_gradient(dv):
    """Components g_k = -D(zeta_k) of the candidate gradient of S.

    zeta is the dual basis under the scaled bracket: zeta_k = xi_p for
    z_k = x_p and zeta_k = -x_p for z_k = xi_p. If D comes from an inner
    generator then g_k = dS/dz_k.
    """
    d = dv.ctx.dim
    return [-dv.images[d + p] for p in range(d)] + \
        [dv.images[p] for p in range(d)]


def closedness_check(dv):
    """Symmetry of the would-be Hessian: d(g_k)/dz_l == d(g_l)/dz_k."""
    g = dual_gradient(dv)
    n = dv.ctx.nvars
    for k in range(n):
        for l in range(k + 1, n):
            if g[k].partial(l) != g[l].partial(k):
                return False
    return True


def poincare_integrate(dv):
    """Radial integration of the dual gradient to a generator S.

    S is homogeneous-degree-weighted: a gradient term of z-degree m
    contributes with weight 1/(m+1) after multiplication by z_k. The
    result lives one truncation order above the derivation's context.
    Raises ClosednessError if the candidate is not an exact gradient.
    """
    ctx = dv.ctx
    g = dual_gradient(dv)
    n = ctx.nvars
    lifted = ctx.lifted()
    acc = {}
    for k in range(n):
        for (h, e), (re, im) in g[k]._raw.items():
            m = sum(e)
            exps = list(e)
            exps[k] += 1
            key = (h, tuple(exps))
            q = _Q(1, m + 1)
            cur = acc.get(key)
            if cur is None:
                acc[key] = (re * q, im * q)
            else:
                acc[key] = (cur[0] + re * q, cur[1] + im * q)
    s = WeylElement._from_raw(
        lifted, {k: v for k, v in acc.items() if v[0] or v[1]})
    for k in range(n):
        if s.partial(k) != g[k]:
            raise ClosednessError(
                f"gradient candidate is not closed at variable "
                f"{ctx.variable_name(k)}")
    return s


def kernel_check(phi):
    """True iff phi fixes hbar and has identity linear part."""
    if not phi.hbar_scale.is_one():
        return False
    rows = linear_part(phi)
    for k, row in enumerate(rows):
        for l, v in enumerate(row):
            if not (v.is_one() if k == l else v.is_zero()):
                return False
    return True


@dataclass(frozen=True)
class GeneratorResidual:
    index: int
    passed: bool
    first_mismatch_grade: int | None
    max_grade_checked: int


@dataclass(frozen=True)
class ResidualReport:
    generators: tuple

    @property
    def passed(self):
        return all(g.passed for g in self.generators)

    def __bool__(self):
        return self.passed

    def first_failure(self):
        for g in self.generators:
            if not g.passed:
                return g
        return None


@dataclass(frozen=True)
class FactorizationResult:
    matrix: SympMatrix
    generator: WeylElement
    report: ResidualReport

    @property
    def trunc(self):
        return self.generator.ctx.trunc - 1

    @property
    def dim(self):
        return self.matrix.dim


def verify_factorization(phi, m, s):
    """Recompose pullback(M) o inner(S) and compare to phi, per generator.

    No judgement calls: the report lists, for each generator, whether the
    images agree on the nose and otherwise the lowest grade that differs.
    The linear factor is rebuilt directly from the matrix rows, with no
    symplecticity requirement, so near-miss candidates can be diagnosed.
    """
    ctx = phi.ctx
    lin = AutomorphismData(ctx, _linear_forms(m, ctx), G_ONE)
    recomposed = compose(lin, inner_automorphism(s, ctx))
    gens = []
    for k in range(ctx.nvars):
        diff = recomposed.images[k] - phi.images[k]
        lg = diff.lowest_grade()
        gens.append(GeneratorResidual(
            index=k,
            passed=lg is None,
            first_mismatch_grade=lg,
            max_grade_checked=ctx.trunc))
    return ResidualReport(tuple(gens))


def factor(phi):
    """Split phi into (matrix, generator) with a verification report.

    Raises HbarScaleError, LinearPartNotInvertibleError,
    LinearPartNotSymplecticError, ClosednessError or ResidualMismatchError
    when phi is not of the required form; the error identifies the first
    obstruction encountered.
    """
    if not phi.hbar_scale.is_one():
        raise HbarScaleError(
            f"cannot factor: hbar scale is {phi.hbar_scale}, need 1")
    for k, im in enumerate(phi.images):
        lg = im.lowest_grade()
        if lg is not None and lg < 1:
            raise InvalidImageError(
                f"image of generator {k} is not in the positive-grade ideal")
    rows = linear_part(phi)
    try:
        m = SympMatrix(rows)
    except SingularMatrixError as exc:
        raise LinearPartNotInvertibleError(
            "linear part of the automorphism is singular") from exc
    if not is_symplectic(m):
        raise LinearPartNotSymplecticError(
            "linear part does not preserve the symplectic form")
    psi = compose(pullback_automorphism(m.inverse(), phi.ctx), phi)
    dv = log_automorphism(psi)
    if not closedness_check(dv):
        raise ClosednessError(
            "logarithm of the nonlinear part is not a bracket derivation")
    s = poincare_integrate(dv)
    report = verify_factorization(phi, m, s)
    if not report.passed:
        bad = report.first_failure()
        raise ResidualMismatchError(
            f"recomposition differs from input on generator {bad.index} "
            f"at grade {bad.first_mismatch_grade}")
    return FactorizationResult(matrix=m, generator=s, report=report)
