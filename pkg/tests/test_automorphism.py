"""Automorphism application, verification, derivations, exp and log."""

import pytest

from weylalg import (
    AutomorphismData,
    AutomorphismError,
    Context,
    ContextError,
    DerivationData,
    GaussianRational,
    InnerGeneratorError,
    InvalidImageError,
    KernelPreconditionError,
    WeylElement,
    apply,
    compose,
    derivation_apply,
    exp_derivation,
    identity_automorphism,
    inner_automorphism,
    is_real,
    linear_part,
    log_automorphism,
    moyal,
    parse_element,
    scaled_bracket,
    verify_morphism,
)
from weylalg.elements import monomials_of_grade
from weylalg.sampling import (
    random_element,
    random_inner_generator,
    random_instance,
    random_kernel_derivation,
)


def _parse(text, ctx):
    return parse_element(text, ctx)


def _x(ctx, k=0):
    return WeylElement.variable(ctx, k)


def _cubic_inner(ctx):
    return inner_automorphism(_parse("x1^3", ctx.lifted()), ctx)


def test_identity_automorphism(rng, ctx2):
    ident = identity_automorphism(ctx2)
    for _ in range(5):
        a = random_element(rng, ctx2, 4, complex_scalars=True)
        assert ident.apply(a) == a


def test_image_validation(ctx1):
    with pytest.raises(InvalidImageError):
        AutomorphismData(ctx1, [_parse("x1 + 1", ctx1), _parse("p1", ctx1)])
    with pytest.raises(InvalidImageError):
        AutomorphismData(ctx1, [_parse("x1", ctx1)])  # wrong count
    with pytest.raises(ContextError):
        AutomorphismData(ctx1, [_x(Context(1, 6), 0), _x(ctx1, 1)])
    with pytest.raises(AutomorphismError):
        AutomorphismData(ctx1, [_x(ctx1, 0), _x(ctx1, 1)], 0)
    # a zero image is degenerate but representable
    AutomorphismData(ctx1, [WeylElement.zero(ctx1), _x(ctx1, 1)])


def test_inner_cubic_golden(ctx1):
    phi = _cubic_inner(ctx1)
    assert phi.images[0] == _parse("x1", ctx1)
    assert phi.images[1] == _parse("p1 - 3*x1^2", ctx1)
    assert phi.apply(_parse("x1*p1", ctx1)) == _parse("x1*p1 - 3*x1^3", ctx1)


def test_inner_generator_gate(ctx1):
    with pytest.raises(InnerGeneratorError):
        inner_automorphism(_parse("x1^2", ctx1.lifted()), ctx1)
    # zero generator gives the identity
    phi = inner_automorphism(WeylElement.zero(ctx1.lifted()), ctx1)
    assert phi.images[0] == _x(ctx1, 0)
    assert phi.images[1] == _x(ctx1, 1)


def test_inner_automorphism_is_morphism(rng):
    for d in (1, 2):
        ctx = Context(d, 8)
        s = random_inner_generator(rng, ctx, 3, complex_scalars=True)
        assert verify_morphism(inner_automorphism(s, ctx), 4)


def test_hbar_scale_action(ctx1):
    two = GaussianRational(2)
    phi = AutomorphismData(ctx1, [_x(ctx1, 0), _parse("2*p1", ctx1)], two)
    h = WeylElement.hbar(ctx1)
    assert phi.apply(h) == h.scale(2)
    assert phi.apply(WeylElement.hbar(ctx1, 3)) == WeylElement.hbar(ctx1, 3).scale(8)
    assert verify_morphism(phi, 4)


def test_apply_is_linear_and_memo_stable(rng, ctx2):
    phi, _m, _s = random_instance(rng, ctx2)
    a = random_element(rng, ctx2, 4, complex_scalars=True)
    b = random_element(rng, ctx2, 4, complex_scalars=True)
    first = phi.apply(a + b)
    assert first == phi.apply(a) + phi.apply(b)
    assert phi.apply(a + b) == first  # memoized second pass identical
    assert apply(phi, a) == phi.apply(a)


def test_compose_is_pointwise_composition(rng, ctx2):
    phi, _, _ = random_instance(rng, ctx2)
    psi, _, _ = random_instance(rng, ctx2)
    both = compose(phi, psi)
    for _ in range(3):
        a = random_element(rng, ctx2, 3, complex_scalars=True)
        assert both.apply(a) == phi.apply(psi.apply(a))
    assert both.hbar_scale.is_one()


def test_verify_morphism_accepts_shear(ctx1):
    shear = AutomorphismData(ctx1, [_parse("x1", ctx1), _parse("p1 + x1", ctx1)])
    report = verify_morphism(shear, 4)
    assert report and report.passed
    assert report.pairs_checked > 0


def test_verify_morphism_rejects_scaling_with_fixed_hbar(ctx1):
    stretch = AutomorphismData(ctx1, [_parse("x1", ctx1), _parse("2*p1", ctx1)])
    report = verify_morphism(stretch, 4)
    assert not report
    assert report.failures[0][0] == "relation"


def test_verify_morphism_rejects_nonmultiplicative_images(ctx1):
    bad = AutomorphismData(ctx1, [_parse("x1 + x1^3", ctx1), _parse("p1", ctx1)])
    assert not verify_morphism(bad, 4)
    # product failure without a relation failure: dilate one variable pair
    sneaky = AutomorphismData(
        ctx1, [_parse("x1 + x1^2", ctx1), _parse("p1", ctx1)])
    assert not verify_morphism(sneaky, 4)


def test_verify_morphism_grade_bound_validation(ctx1):
    with pytest.raises(ContextError):
        verify_morphism(identity_automorphism(ctx1), 99)


def test_is_real(ctx1):
    assert is_real(_cubic_inner(ctx1))
    complex_gen = inner_automorphism(_parse("i*x1^3", ctx1.lifted()), ctx1)
    assert not is_real(complex_gen)
    # imaginary coefficients on hbar-carrying terms stay real by convention
    phi = AutomorphismData(
        ctx1, [_parse("x1", ctx1), _parse("p1 + i*h", ctx1)])
    assert is_real(phi)


def test_linear_part_reads_grade_one(ctx1):
    phi = _cubic_inner(ctx1)
    rows = linear_part(phi)
    assert rows[0][0].is_one() and rows[1][1].is_one()
    assert rows[0][1].is_zero() and rows[1][0].is_zero()


def test_derivation_validation(ctx1):
    with pytest.raises(InvalidImageError):
        DerivationData(ctx1, [_parse("1", ctx1), _parse("p1", ctx1)])
    dv = DerivationData(ctx1, [_parse("x1^2", ctx1), WeylElement.zero(ctx1)])
    assert derivation_apply(dv, _parse("x1", ctx1)) == _parse("x1^2", ctx1)
    assert dv.apply(WeylElement.hbar(ctx1)).is_zero()
    assert dv.apply(WeylElement.one(ctx1)).is_zero()


def test_bracket_derivation_images(ctx1):
    s = _parse("x1^3", ctx1.lifted())
    images = [scaled_bracket(s, _x(ctx1, 0)), scaled_bracket(s, _x(ctx1, 1))]
    assert images[0].is_zero()
    assert images[1] == _parse("-3*x1^2", ctx1)


def test_derivation_leibniz_exhaustive_low_grades(rng, ctx1):
    dv = random_kernel_derivation(rng, ctx1)
    keys = []
    for g in range(0, 6):
        keys.extend((g, k) for k in monomials_of_grade(ctx1, g))
    for gu, (hu, eu) in keys:
        u = WeylElement.monomial(ctx1, hu, eu)
        for gv, (hv, ev) in keys:
            if gu + gv > 6:
                continue
            v = WeylElement.monomial(ctx1, hv, ev)
            assert derivation_apply(dv, moyal(u, v)) == \
                moyal(dv.apply(u), v) + moyal(u, dv.apply(v))


def test_exp_log_golden(ctx1):
    phi = _cubic_inner(ctx1)
    dv = log_automorphism(phi)
    assert dv.images[0].is_zero()
    assert dv.images[1] == _parse("-3*x1^2", ctx1)
    back = exp_derivation(dv)
    assert back.images[0] == phi.images[0]
    assert back.images[1] == phi.images[1]


def test_exp_log_roundtrip_random(rng):
    for d in (1, 2):
        ctx = Context(d, 8)
        for _ in range(5):
            dv = random_kernel_derivation(rng, ctx, complex_scalars=True)
            back = log_automorphism(exp_derivation(dv))
            assert all(a == b for a, b in zip(back.images, dv.images))


def test_log_preconditions(ctx1):
    shear = AutomorphismData(ctx1, [_parse("x1", ctx1), _parse("p1 + x1", ctx1)])
    with pytest.raises(KernelPreconditionError):
        log_automorphism(shear)
    scaled = AutomorphismData(
        ctx1, [_parse("x1", ctx1), _parse("2*p1", ctx1)], 2)
    with pytest.raises(KernelPreconditionError):
        log_automorphism(scaled)


def test_exp_preconditions(ctx1):
    bad = DerivationData(ctx1, [_parse("x1", ctx1), WeylElement.zero(ctx1)])
    with pytest.raises(KernelPreconditionError):
        exp_derivation(bad)


def test_apply_context_checks(rng, ctx1, ctx2):
    phi, _, _ = random_instance(rng, ctx1)
    with pytest.raises(ContextError):
        phi.apply(WeylElement.one(ctx2))
    with pytest.raises(ContextError):
        phi.apply(WeylElement.one(Context(1, 6)))
