import json

import pytest
import sympy

from ode_linearizer.core.ansatz import (
    AnsatzSolver,
    Candidate,
    check_solution,
    dump_system,
    enumerate_candidates,
    exponent_vectors,
    load_system,
    match_coefficients,
    solve_ansatz,
    unknown_names,
)
from ode_linearizer.core.errors import NotPolynomialInJetVars, SearchBudgetExceeded
from ode_linearizer.schemas import (
    AnsatzFamily,
    AnsatzKind,
    Branch,
    DeterminingEquation,
    DeterminingSystem,
    SolveStatus,
    UnknownFunction,
    ZeroFlag,
)
from ode_linearizer.symbols import P, U, X

H = sympy.Function("H")(X, U)
b = sympy.Function("b")(X, U)

RICCATI = 2 / (U * P) * (sympy.Derivative(H, X) + P * sympy.Derivative(H, U)) + H**2 + 3 / U**4
SCALING = sympy.Derivative(b, X) + P * sympy.Derivative(b, U) - P * b / U


def _system(expression, name: str, nonzero: bool = False) -> DeterminingSystem:
    return DeterminingSystem(
        branch=Branch.FOUR_LAGUERRE,
        unknowns=[UnknownFunction(name=name, arguments=["x", "u"], nonzero=nonzero)],
        equations=[DeterminingEquation(expression=expression, provenance=f"{name}: test")],
    )


def test_match_coefficients_splits_powers_of_p():
    coefficients = match_coefficients(RICCATI)
    assert len(coefficients) == 2
    assert sympy.Derivative(H, X) in coefficients


def test_match_coefficients_of_scaling_equation():
    coefficients = match_coefficients(SCALING)
    assert len(coefficients) == 2
    assert sympy.Derivative(b, X) in coefficients


def test_match_coefficients_of_zero():
    assert match_coefficients(0) == []


def test_match_coefficients_rejects_transcendental_jet_nodes():
    with pytest.raises(NotPolynomialInJetVars):
        match_coefficients(sympy.exp(P * H))


def test_unknown_names():
    assert unknown_names(RICCATI) == {"H"}


def test_exponent_vectors_order():
    assert exponent_vectors(2, 1) == [
        (0, 0),
        (-1, 0),
        (0, -1),
        (0, 1),
        (1, 0),
        (-1, -1),
        (-1, 1),
        (1, -1),
        (1, 1),
    ]


def test_zero_candidate_comes_first():
    unknown = UnknownFunction(name="H", arguments=["x"])
    family = AnsatzFamily(kind=AnsatzKind.SINGLE_VARIABLE, max_exponent=1)
    candidates = list(enumerate_candidates(unknown, family))
    assert len(candidates) == 4
    assert candidates[0].expression == 0
    assert candidates[0].constants == ()
    nonzero = list(enumerate_candidates(unknown.model_copy(update={"nonzero": True}), family))
    assert len(nonzero) == 3


def test_solve_riccati_with_alternate():
    solution = solve_ansatz(_system(RICCATI, "H"), AnsatzFamily(max_exponent=3))
    assert solution.status is SolveStatus.SOLVED
    assert solution.bindings["H"] == 1 / U**2
    assert solution.alternates["H"] == [3 / U**2]


def test_solve_scaling_equation():
    solution = solve_ansatz(_system(SCALING, "b", nonzero=True), AnsatzFamily(max_exponent=2))
    assert solution.bindings["b"] == U


def test_failed_search_returns_residual():
    equation = sympy.Derivative(H, X) - H
    solution = solve_ansatz(_system(equation, "H", nonzero=True), AnsatzFamily(max_exponent=1))
    assert solution.status is SolveStatus.FAILED
    assert solution.candidates_tried == 9
    assert solution.residual is not None
    assert solution.residual.branch is Branch.FOUR_LAGUERRE


def test_budget():
    solver = AnsatzSolver(AnsatzFamily(max_exponent=3), budget=2)
    with pytest.raises(SearchBudgetExceeded):
        solver.solve(_system(RICCATI, "H"))


def test_check_solution():
    system = _system(SCALING, "b", nonzero=True)
    assert check_solution(system, {"b": U}) == {"b: test": ZeroFlag.ZERO}
    assert check_solution(system, {"b": X}) == {"b: test": ZeroFlag.NONZERO}


def test_dump_and_load():
    system = _system(RICCATI, "H")
    data = dump_system(system)
    json.dumps(data)
    assert data["branch"] == "four_laguerre"
    loaded = load_system(data)
    assert loaded.unknowns == system.unknowns
    assert sympy.simplify(loaded.equations[0].expression - system.equations[0].expression) == 0
    assert check_solution(loaded, {"H": 1 / U**2}) == {"H: test": ZeroFlag.ZERO}


def test_shifted_power_candidates():
    unknown = UnknownFunction(name="a", arguments=["x", "p"], nonzero=True)
    candidates = list(enumerate_candidates(unknown, AnsatzFamily(kind=AnsatzKind.SHIFTED_POWER, max_exponent=2)))
    assert len(candidates) == 4
    assert all(len(c.constants) == 2 for c in candidates)
    scale, shift = candidates[3].constants
    assert candidates[3].expression == scale * (P + shift) ** -2


def test_solve_with_shifted_power():
    a = sympy.Function("a")(X, U)
    family = AnsatzFamily(kind=AnsatzKind.SHIFTED_POWER, max_exponent=3)
    solution = solve_ansatz(_system(a * (U - 1) ** 2 - 1, "a", nonzero=True), family)
    assert solution.status is SolveStatus.SOLVED
    assert sympy.simplify(solution.bindings["a"] - 1 / (U - 1) ** 2) == 0
    assert solution.candidates_tried == 4


def test_screen_rejects_a_shape_that_cannot_fit():
    c = sympy.Dummy("c0")
    solver = AnsatzSolver()
    assert solver._screened_out(Candidate(0, c * U, (c,)), [c * U - X**2])
    assert solver._screened_out(Candidate(0, c * X, (c,)), [c * X * P])
    assert not solver._screened_out(Candidate(0, c * X**2, (c,)), [(c - 1) * X**2])


def test_screened_candidates_count_towards_the_budget(mocker):
    equation = sympy.Derivative(H, X) - H
    screen = mocker.spy(AnsatzSolver, "_screened_out")
    solution = solve_ansatz(_system(equation, "H", nonzero=True), AnsatzFamily(max_exponent=1))
    assert solution.candidates_tried == 9
    assert screen.call_count == 9
