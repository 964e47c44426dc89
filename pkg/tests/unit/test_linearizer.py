import random

import pytest
import sympy

from ode_linearizer.core.ansatz import check_solution, dump_system, load_system
from ode_linearizer.core.classifier import classify
from ode_linearizer.core.errors import AnsatzFailed, NoClosedFormInverse, NotLinearizable, Undecided, WrongBranch
from ode_linearizer.core.expr import substitute
from ode_linearizer.core.jet import compose, invert, make_context, verify_transformation
from ode_linearizer.core.linearizer import (
    Linearizer,
    build_system_five,
    build_system_four_LF,
    build_system_four_Yum,
    build_system_seven,
    constant_coefficient_rhs,
    explicit_in_xbar,
    laguerre_forsyth_rhs,
    linearize,
    pushforward,
    verify_result,
    yumaguzhin_coefficient,
)
from ode_linearizer.core.radicals import Cbrt
from ode_linearizer.schemas import (
    Branch,
    CanonicalTarget,
    PointTransformation,
    Sign,
    TargetForm,
    Verdict,
    ZeroFlag,
)
from ode_linearizer.symbols import PB, QB, UB, XB, P, Q, U, X
from tests.fixtures import (
    FIVE_NONLINEAR,
    INHOMOGENEOUS_FIVE,
    INHOMOGENEOUS_FOUR,
    INHOMOGENEOUS_SCALED,
    NOT_LINEARIZABLE,
    SEVEN_NONLINEAR,
    SHIFTED_SEVEN,
    same,
)

SWAP = PointTransformation(phi=U, psi=X)


def _all_zero(flags: dict[str, ZeroFlag]) -> bool:
    return all(flag is ZeroFlag.ZERO for flag in flags.values())


def _unbar(expr):
    return substitute(expr, {XB: X, UB: U, PB: P, QB: Q})


def test_seven_system(trivial):
    system = build_system_seven(trivial)
    assert system.branch is Branch.SEVEN
    assert [u.name for u in system.unknowns] == ["a3", "A", "a1", "phi", "psi"]
    assert not system.unknown("A").nonzero
    assert _all_zero(check_solution(system, {"a3": 1, "A": 0, "a1": 1, "phi": X, "psi": U}))


def test_five_system(constant):
    system = build_system_five(constant)
    assert [u.name for u in system.unknowns] == ["a1", "phi", "psi"]
    assert _all_zero(check_solution(system, {"a1": 1, "phi": X, "psi": U}))


def test_laguerre_forsyth_system(ex1):
    system = build_system_four_LF(ex1)
    assert [u.name for u in system.unknowns] == ["H", "b", "a1", "phi", "psi"]
    assert len(system.equations) == 5
    solution = {"H": 1 / U**2, "b": U, "a1": 1 / P, "phi": U, "psi": -X}
    assert _all_zero(check_solution(system, solution))
    alternate = check_solution(system, {**solution, "H": 3 / U**2})
    assert alternate["H: (2/J) D_x H + H^2 = K"] is ZeroFlag.ZERO


def test_laguerre_forsyth_system_rejects_wrong_H(ex1):
    flags = check_solution(build_system_four_LF(ex1), {"H": 2 / U**2, "b": U, "a1": 1 / P, "phi": U, "psi": -X})
    assert flags["H: (2/J) D_x H + H^2 = K"] is ZeroFlag.NONZERO


def test_yumaguzhin_system(ex1):
    system = build_system_four_Yum(ex1, sign=Sign.MINUS)
    assert system.branch is Branch.FOUR_YUMAGUZHIN
    assert same(system.fixed["phi"], 3 * Cbrt(2) / (2 * U**4))
    assert _all_zero(check_solution(system, {"a1": 1 / (U**5 * P), "psi": -X / U**5}))


def test_systems_check_their_branch(ex1, trivial, constant):
    with pytest.raises(WrongBranch):
        build_system_seven(constant)
    with pytest.raises(WrongBranch):
        build_system_five(ex1)
    with pytest.raises(WrongBranch):
        build_system_four_LF(trivial)
    with pytest.raises(WrongBranch) as excinfo:
        build_system_four_Yum(constant)
    assert excinfo.value.verdict is Verdict.FIVE


def test_canonical_right_hand_sides():
    assert constant_coefficient_rhs(0) == UB
    assert constant_coefficient_rhs(2) == 2 * PB + UB
    assert laguerre_forsyth_rhs(XB) == XB**3 * UB


def test_yumaguzhin_coefficient():
    g = sympy.sqrt(3) / 4 * XB ** sympy.Rational(-3, 2)
    assert same(yumaguzhin_coefficient(g, Sign.MINUS), -sympy.Rational(15, 16) / XB**2)


def test_explicit_in_xbar_linear():
    assert explicit_in_xbar(U, U) == XB
    assert same(explicit_in_xbar(2 * X + 1, X**2), (XB - 1) ** 2 / 4)


def test_explicit_in_xbar_monomial():
    assert same(explicit_in_xbar(2 * U**2, U**4), XB**2 / 4)
    g = explicit_in_xbar(3 * Cbrt(2) / (2 * U**4), U**6 / 6)
    assert abs(float(g.subs(XB, 4)) - 3**0.5 / 32) < 1e-12


def test_explicit_in_xbar_gives_up():
    assert explicit_in_xbar(X * U, X) is None
    assert explicit_in_xbar(U**2 + U, U) is None
    assert explicit_in_xbar(U, X) is None


def test_linearize_trivial(trivial):
    result = linearize(trivial)
    assert result.verdict is Verdict.SEVEN
    assert result.transformation == PointTransformation(phi=X, psi=U)
    assert result.canonical.form is TargetForm.TRIVIAL
    assert result.verification.verified


def test_linearize_constant(constant):
    result = linearize(constant)
    assert result.verdict is Verdict.FIVE
    assert result.canonical.s == 0
    assert result.transformation == PointTransformation(phi=X, psi=U)


def test_linearize_seven_nonlinear(context):
    result = linearize(context(SEVEN_NONLINEAR))
    assert result.transformation.phi == U
    assert result.transformation.psi == -X
    assert same(result.auxiliaries["a3"], 1 / P**2)
    assert result.auxiliaries["A"] == 0
    assert same(result.auxiliaries["a1"], 1 / P)


def test_linearize_five_nonlinear(context):
    result = linearize(context(FIVE_NONLINEAR))
    assert result.verdict is Verdict.FIVE
    assert result.transformation.phi == U
    assert result.transformation.psi == -X
    assert result.canonical.rhs == UB


def test_linearize_cubic(cubic):
    result = linearize(cubic)
    assert result.transformation == PointTransformation(phi=X, psi=U)
    assert result.canonical.a_bar == XB
    assert result.identity_checks["a_identity"] is ZeroFlag.ZERO


def test_linearize_ex1(ex1):
    result = linearize(ex1, CanonicalTarget.LAGUERRE)
    assert result.verdict is Verdict.FOUR
    assert result.transformation.phi == U
    assert result.transformation.psi == -X
    assert result.auxiliaries["H"] == 1 / U**2
    assert result.auxiliaries["b"] == U
    assert same(result.auxiliaries["a1"], 1 / P)
    assert result.alternates["H"] == [3 / U**2]
    assert result.canonical.a_bar == XB
    assert result.canonical.rhs == XB**3 * UB
    assert result.identity_checks["a_identity"] is ZeroFlag.ZERO
    assert result.verification.verified
    assert verify_result(ex1, result).verified


def test_auto_target_is_laguerre_forsyth(ex1):
    assert linearize(ex1).canonical.form is TargetForm.LAGUERRE_FORSYTH


@pytest.mark.slow
def test_linearize_ex1_yumaguzhin(ex1):
    result = linearize(ex1, CanonicalTarget.YUMAGUZHIN)
    canonical = result.canonical
    assert canonical.sign is Sign.MINUS
    assert not canonical.complex_branch
    assert abs(float(canonical.g_bar.subs(XB, 4)) - 3**0.5 / 32) < 1e-12
    assert same(result.transformation.phi, 3 * Cbrt(2) / (2 * U**4))
    assert same(result.transformation.psi, -X / U**5)
    assert same(result.auxiliaries["a1"], 1 / (U**5 * P))
    assert result.identity_checks["g_identity"] is ZeroFlag.ZERO
    assert result.rejected_branch.sign is Sign.PLUS
    assert result.rejected_branch.complex_branch
    assert result.verification.verified
    assert verify_result(ex1, result).verified


def test_wrong_target(constant, trivial):
    with pytest.raises(WrongBranch):
        linearize(constant, CanonicalTarget.LAGUERRE)
    with pytest.raises(WrongBranch):
        linearize(trivial, CanonicalTarget.YUMAGUZHIN)


def test_not_linearizable(context):
    with pytest.raises(NotLinearizable) as excinfo:
        linearize(context(NOT_LINEARIZABLE))
    assert excinfo.value.failing == ["I2"]


def test_undecided(mocker, ex1):
    from ode_linearizer.core import invariants

    original = invariants._flag
    mocker.patch(
        "ode_linearizer.core.invariants._flag",
        side_effect=lambda tester, name, expr: ZeroFlag.UNKNOWN if name == "I1" else original(tester, name, expr),
    )
    with pytest.raises(Undecided) as excinfo:
        linearize(ex1)
    assert excinfo.value.undecided == ["I1"]


def test_ansatz_budget_exhausted(ex1):
    with pytest.raises(AnsatzFailed) as excinfo:
        Linearizer(budget=3).linearize(ex1)
    residual = excinfo.value.residual
    assert residual.branch is Branch.FOUR_LAGUERRE
    solution = {"H": 1 / U**2, "b": U, "a1": 1 / P, "phi": U, "psi": -X}
    assert _all_zero(check_solution(residual, solution))


def test_pushforward_interchange(trivial, constant, cubic):
    assert same(pushforward(trivial, SWAP), 3 * QB**2 / PB)
    assert same(pushforward(constant, SWAP), 3 * QB**2 / PB - XB * PB**4)
    assert same(pushforward(cubic, SWAP), 3 * QB**2 / PB - XB * UB**3 * PB**4)


def test_pushforward_scaling(cubic):
    assert same(pushforward(cubic, PointTransformation(phi=X, psi=2 * U)), XB**3 * UB)


def test_pushforward_without_inverse(trivial):
    with pytest.raises(NoClosedFormInverse):
        pushforward(trivial, PointTransformation(phi=X**2, psi=U))


@pytest.mark.parametrize(
    "source, transformation, verdict",
    [
        ("u''' = x^3*u", PointTransformation(phi=X + 1, psi=U), Verdict.FOUR),
        ("u''' = u", PointTransformation(phi=2 * X, psi=U), Verdict.FIVE),
        ("u''' = 0", PointTransformation(phi=X, psi=U + X), Verdict.SEVEN),
        ("u''' = x^3*u", PointTransformation(phi=X, psi=U + X), Verdict.FOUR),
        ("u''' = u", PointTransformation(phi=X, psi=X * U), Verdict.FIVE),
    ],
)
def test_classification_survives_point_transformations(context, source, transformation, verdict):
    pushed = make_context(_unbar(pushforward(context(source), transformation)))
    assert classify(pushed).verdict is verdict


def test_inhomogeneous_term_is_absorbed_into_psi(context):
    ctx = context(INHOMOGENEOUS_FIVE)
    result = linearize(ctx)
    assert result.verdict is Verdict.FIVE
    assert result.transformation == PointTransformation(phi=X, psi=U - X)
    assert verify_transformation(ctx, result.transformation, UB).verified


def test_inhomogeneous_laguerre_forsyth(context):
    ctx = context(INHOMOGENEOUS_FOUR)
    result = linearize(ctx)
    assert result.verdict is Verdict.FOUR
    assert result.transformation.phi == X
    assert same(result.transformation.psi, U - X)
    assert result.canonical.rhs == XB**3 * UB
    assert verify_result(ctx, result).verified


def test_particular_solution_in_a_rescaled_variable(context):
    ctx = context(INHOMOGENEOUS_SCALED)
    result = linearize(ctx)
    t = result.transformation
    assert result.verdict is Verdict.FIVE
    assert same(t.phi, X / 2)
    assert same(t.psi, U + (X / 2) ** 2 - X / 2 + sympy.Rational(1, 4))
    assert verify_transformation(ctx, t, constant_coefficient_rhs(result.canonical.s)).verified


def test_unverifiable_psi_leaves_an_open_system(mocker, context):
    mocker.patch.object(Linearizer, "_particular_shift", return_value=None)
    with pytest.raises(AnsatzFailed) as excinfo:
        linearize(context(INHOMOGENEOUS_FIVE))
    residual = excinfo.value.residual
    assert residual.branch is Branch.FIVE
    assert set(residual.fixed) == {"a1", "phi"}
    assert residual.equations[-1].provenance.startswith("psi: pullback")
    flags = check_solution(load_system(dump_system(residual)), {**residual.fixed, "psi": U - X})
    assert _all_zero(flags)


@pytest.mark.slow
def test_shifted_powers_of_p(context):
    ctx = context(SHIFTED_SEVEN)
    result = linearize(ctx)
    assert result.verdict is Verdict.SEVEN
    assert same(result.auxiliaries["a3"], 1 / (P - 1) ** 2)
    assert result.verification.verified
    assert verify_transformation(ctx, result.transformation, 0).verified


SEEDS = [("u''' = 0", Verdict.SEVEN), ("u''' = u", Verdict.FIVE), ("u''' = x^3*u", Verdict.FOUR)]


def _generator(rng: random.Random) -> PointTransformation:
    a = sympy.Integer(rng.choice([-2, -1, 2, 3]))
    b = sympy.Integer(rng.choice([-2, -1, 1, 2]))
    return rng.choice(
        [
            PointTransformation(phi=X + b, psi=U),
            PointTransformation(phi=X, psi=U + b),
            PointTransformation(phi=a * X, psi=U),
            PointTransformation(phi=X, psi=a * U),
            PointTransformation(phi=X, psi=U + b * X ** rng.randint(1, 2)),
            PointTransformation(phi=X, psi=X * U),
            SWAP,
        ]
    )


@pytest.mark.slow
@pytest.mark.parametrize("case", range(20))
def test_random_point_transformations_of_linear_equations(context, case):
    rng = random.Random(case)
    source, verdict = SEEDS[case % len(SEEDS)]
    seed = context(source)
    transformation = compose(_generator(rng), _generator(rng))
    pushed = make_context(_unbar(pushforward(seed, transformation)))

    assert classify(pushed).verdict is verdict

    try:
        result = Linearizer(budget=1500).linearize(pushed)
    except AnsatzFailed as exc:
        reloaded = load_system(dump_system(exc.residual))
        assert reloaded.branch == exc.residual.branch
        assert [u.name for u in reloaded.unknowns] == [u.name for u in exc.residual.unknowns]
        x_of, u_of = invert(transformation)
        back = PointTransformation(phi=_unbar(x_of), psi=_unbar(u_of))
        assert verify_transformation(pushed, back, substitute(seed.f, {X: XB, U: UB, P: PB, Q: QB})).verified
    else:
        assert result.verdict is verdict
        assert result.verification.verified
        assert verify_result(pushed, result).verified
