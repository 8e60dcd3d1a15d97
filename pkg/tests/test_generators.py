import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from errorgen.channels import amplitude_damping, indivisible_xy, make_random_small, random_lindbladian_rates
from errorgen.errors import InvalidLabelError, NonTPGeneratorError, QubitCountMismatch, SingularMatrixError
from errorgen.generators import (
    KINDS,
    ErrorGeneratorRates,
    GeneratorLabel,
    all_labels,
    decompose,
    dual_generator,
    elementary_generator,
    extract_error_generator,
    pairing_matrix,
    process_from_rates,
    reconstruct,
    sector_dimension,
    sector_split,
    stochastic_constraints,
    stochastic_tensor,
)
from errorgen.superop import check_process, hs_inner, matrix_exp, matrix_log

from conftest import SINGLE, oracle_generator, random_unitary, unitary_ptm

CLIFFORD_GENS = {
    "H": np.array([[1, 1], [1, -1]]) / np.sqrt(2),
    "S": np.diag([1, 1j]),
}


def single_qubit_cliffords():
    """All 24 single-qubit Cliffords modulo phase, by closure over H and S."""
    found = [np.eye(2, dtype=complex)]

    def known(u):
        for v in found:
            overlap = np.trace(v.conj().T @ u)
            if abs(abs(overlap) - 2) < 1e-9:
                return True
        return False

    frontier = list(found)
    while frontier:
        nxt = []
        for u in frontier:
            for g in CLIFFORD_GENS.values():
                w = g @ u
                if not known(w):
                    found.append(w)
                    nxt.append(w)
        frontier = nxt
    return found


def label_strategy(n):
    return st.sampled_from(all_labels(n))


# ---- labels -------------------------------------------------------------


def test_label_parse_and_canonical_order():
    assert str(GeneratorLabel.parse("H:Y")) == "H(Y)"
    assert GeneratorLabel.parse("C:IX,ZX") == GeneratorLabel.parse("C(IX,ZX)")
    with pytest.raises(InvalidLabelError):
        GeneratorLabel.parse("C:Z,X")
    with pytest.raises(InvalidLabelError):
        GeneratorLabel.parse("S:I")
    with pytest.raises(InvalidLabelError):
        GeneratorLabel.parse("A:X")
    with pytest.raises(InvalidLabelError):
        GeneratorLabel.parse("H:X,Y")
    with pytest.raises(InvalidLabelError):
        GeneratorLabel.parse("C:X,X")


def test_label_weight_is_union_of_supports():
    lb = GeneratorLabel.parse("C:IZ,XI")
    assert lb.support == frozenset({0, 1}) and lb.weight == 2


@pytest.mark.parametrize("n, sizes", [(1, (3, 3, 3, 3)), (2, (15, 15, 105, 105))])
def test_sector_sizes(n, sizes):
    assert tuple(sector_dimension(k, n) for k in KINDS) == sizes
    labels = all_labels(n)
    assert tuple(sum(lb.kind == k for lb in labels) for k in KINDS) == sizes


# ---- elementary generators ---------------------------------------------


def test_hamiltonian_y_action():
    want = np.zeros((4, 4))
    want[3, 1] = -2  # X -> -2Z
    want[1, 3] = 2  # Z -> 2X
    np.testing.assert_allclose(elementary_generator("H:Y"), want, atol=1e-12)


def test_stochastic_x_action():
    np.testing.assert_allclose(elementary_generator("S:X"), np.diag([0, 0, -2, -2]), atol=1e-12)


def test_active_xy_action():
    want = np.zeros((4, 4))
    want[3, 0] = -4  # I -> -4Z
    np.testing.assert_allclose(elementary_generator("A:X,Y"), want, atol=1e-12)


def test_correlation_xz_action():
    want = np.zeros((4, 4))
    want[1, 3] = 2  # Z -> 2X
    want[3, 1] = 2  # X -> 2Z
    np.testing.assert_allclose(elementary_generator("C:X,Z"), want, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2])
def test_all_elementary_match_operator_oracle(n):
    for lb in all_labels(n):
        q = str(lb.q) if lb.q is not None else None
        np.testing.assert_allclose(
            elementary_generator(lb), oracle_generator(lb.kind, str(lb.p), q), atol=1e-12, err_msg=str(lb)
        )


@pytest.mark.parametrize("n", [1, 2])
def test_elementary_top_row_zero(n):
    for lb in all_labels(n):
        assert np.all(np.abs(elementary_generator(lb)[0]) < 1e-15)


# ---- duals ---------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2])
def test_pairing_is_identity(n):
    m = pairing_matrix(n)
    assert m.shape == (len(all_labels(n)),) * 2
    np.testing.assert_allclose(m, np.eye(m.shape[0]), atol=1e-10)


def test_pairing_spot_values():
    assert abs(hs_inner(dual_generator("H:X"), elementary_generator("H:X")) - 1) < 1e-12
    assert abs(hs_inner(dual_generator("H:X"), elementary_generator("S:X"))) < 1e-12


@pytest.mark.parametrize("n", [1, 2])
def test_duals_mutually_orthogonal(n):
    duals = np.array([dual_generator(lb).ravel() for lb in all_labels(n)])
    gram = duals @ duals.T
    np.testing.assert_allclose(gram - np.diag(np.diag(gram)), 0, atol=1e-12)


def test_dual_stochastic_not_tp():
    assert np.abs(dual_generator("S:X")[0]).max() > 0.1


# ---- basis completeness ----------------------------------------------------


@pytest.mark.parametrize("n", [1, 2])
def test_basis_spans_tp_generators(n):
    d2 = 4**n
    stack = np.array([elementary_generator(lb).ravel() for lb in all_labels(n)])
    assert np.linalg.matrix_rank(stack) == d2 * (d2 - 1)
    # all of them live in the zero-top-row subspace, which has exactly that dimension
    assert np.abs(stack.reshape(-1, d2, d2)[:, 0, :]).max() < 1e-15


@given(st.integers(0, 2**32 - 1))
def test_decompose_reconstruct_arbitrary_tp_generator(seed):
    r = np.random.default_rng(seed)
    gen = r.normal(size=(16, 16))
    gen[0] = 0
    rates = decompose(gen, floor=0.0)
    resid = np.linalg.norm(reconstruct(rates) - gen)
    assert resid <= 1e-9 * max(1, np.linalg.norm(gen))


def test_decompose_rejects_non_tp():
    gen = np.zeros((4, 4))
    gen[0, 2] = 1e-3
    with pytest.raises(NonTPGeneratorError):
        decompose(gen)


def test_decompose_zero_and_linear():
    assert len(decompose(np.zeros((4, 4)))) == 0
    gen = 0.03 * elementary_generator("H:Z") + 0.01 * elementary_generator("S:X")
    rates = decompose(gen)
    assert set(map(str, rates.labels())) == {"H(Z)", "S(X)"}
    assert abs(rates["H:Z"] - 0.03) < 1e-15 and abs(rates["S:X"] - 0.01) < 1e-15


# ---- extraction & conventions --------------------------------------------


def test_extract_identity_gate():
    g = unitary_ptm(np.kron(SINGLE["X"], SINGLE["Z"]))
    for conv in ("logarithm", "difference"):
        np.testing.assert_allclose(extract_error_generator(g, g, conv), 0, atol=1e-12)


def test_extract_singular_target():
    with pytest.raises(SingularMatrixError):
        extract_error_generator(np.eye(4), np.diag([1, 1, 1, 0.0]))


def test_extract_qubit_mismatch():
    with pytest.raises(QubitCountMismatch):
        extract_error_generator(np.eye(4), np.eye(16))


def test_indivisible_logarithm_rates():
    p = 0.01
    rates = decompose(extract_error_generator(indivisible_xy(p), np.eye(4)))
    s_z = (np.log(1 - 4 * p) - 2 * np.log(1 - 2 * p)) / 4
    s_x = -np.log(1 - 4 * p) / 4
    assert abs(rates["S:Z"] - s_z) < 1e-12
    assert abs(rates["S:X"] - s_x) < 1e-12 and abs(rates["S:Y"] - s_x) < 1e-12
    assert abs(rates["S:Z"] - (-(p**2))) < 0.05 * p**2
    assert abs(rates["S:X"] - (p + 2 * p**2)) < 1e-5


def test_indivisible_difference_rates():
    p = 0.01
    rates = decompose(extract_error_generator(indivisible_xy(p), np.eye(4), "diff"), convention="diff")
    assert rates.convention == "difference"
    assert abs(rates["S:Z"]) < 1e-12
    assert abs(rates["S:X"] - p) < 1e-15 and abs(rates["S:Y"] - p) < 1e-15


@pytest.mark.parametrize("gamma", [1e-3, 1e-2, 0.1])
def test_amplitude_damping_decomposition(gamma):
    rates = decompose(extract_error_generator(amplitude_damping(gamma), np.eye(4)), floor=0.0)
    lam = -np.log(1 - gamma) / 4
    big = {str(lb) for lb, v in rates.items() if abs(v) > 1e-10}
    assert big == {"S(X)", "S(Y)", "A(X,Y)"}
    assert abs(rates["S:X"] - lam) < 1e-9 and abs(rates["S:Y"] - lam) < 1e-9
    # decay toward |0> under i(P rho Q - Q rho P + ...) carries a negative a(X,Y)
    assert abs(rates["A:X,Y"] + lam) < 1e-9


def test_amplitude_damping_sign_fixed_by_cp():
    p = 0.02
    good = ErrorGeneratorRates(1, {"S:X": p, "S:Y": p, "A:X,Y": -p})
    bad = ErrorGeneratorRates(1, {"S:X": p, "S:Y": p, "A:X,Y": p})
    g_good, g_bad = process_from_rates(good), process_from_rates(bad)
    assert check_process(g_good).is_cp and check_process(g_bad).is_cp
    # both are CP (mirror images); the sign picks the fixed point
    assert g_good[3, 0] > 0 and g_bad[3, 0] < 0
    np.testing.assert_allclose(g_good, amplitude_damping(1 - np.exp(-4 * p)), atol=1e-12)


def test_process_from_rates_conventions():
    target = unitary_ptm(SINGLE["X"])
    assert np.array_equal(process_from_rates(ErrorGeneratorRates(1), target), target)
    r = ErrorGeneratorRates(1, {"S:Z": 0.1}, "difference")
    np.testing.assert_allclose(process_from_rates(r, target), (np.eye(4) + 0.1 * elementary_generator("S:Z")) @ target)


def test_hamiltonian_rate_is_rotation():
    theta = 0.21
    got = process_from_rates(ErrorGeneratorRates(1, {"H:X": theta}))
    u = np.cos(theta) * np.eye(2) - 1j * np.sin(theta) * SINGLE["X"]
    np.testing.assert_allclose(got, unitary_ptm(u), atol=1e-12)


def test_random_round_trip_recovers_rates():
    for n, count in ((1, 30), (2, 10)):
        for seed in range(count):
            rates = random_lindbladian_rates(seed, 0.01, n)
            got = decompose(matrix_log(make_random_small(seed, 0.01, n)), floor=0.0)
            diff = (got - rates).norm()
            assert diff < 1e-8


# ---- sectors -------------------------------------------------------------


def test_sector_split_partition():
    rates = random_lindbladian_rates(3, 0.01, 2)
    parts = sector_split(rates)
    assert set(parts) == set(KINDS)
    merged = {}
    for part in parts.values():
        assert not set(part.rates) & set(merged)
        merged.update(part.rates)
    assert merged == rates.rates
    h_only = sector_split(ErrorGeneratorRates(1, {"H:X": 0.1}))
    assert all(len(h_only[k]) == 0 for k in "SCA")


def _random_sector_generator(r, n, kinds):
    labels = [lb for lb in all_labels(n) if lb.kind in kinds]
    return reconstruct(ErrorGeneratorRates(n, {lb: r.normal() for lb in labels}))


def _leakage(gen, kinds):
    rates = decompose(gen, floor=0.0)
    return max((abs(v) for lb, v in rates.items() if lb.kind not in kinds), default=0.0)


@pytest.mark.parametrize("kinds", ["H", "SC", "A"])
def test_unitary_invariance_of_sectors(kinds, rng):
    for _ in range(50):
        u = unitary_ptm(random_unitary(rng, 4))
        gen = _random_sector_generator(rng, 2, kinds)
        assert _leakage(u @ gen @ u.T, kinds) < 1e-9


def test_clifford_preserves_stochastic_sector(rng):
    cliffords = single_qubit_cliffords()
    assert len(cliffords) == 24
    for c in cliffords:
        u = unitary_ptm(c)
        gen = _random_sector_generator(rng, 1, "S")
        assert _leakage(u @ gen @ u.T, "S") < 1e-9


def test_non_clifford_mixes_stochastic_and_correlation():
    u = unitary_ptm(np.diag([1, np.exp(1j * np.pi / 4)]))
    gen = elementary_generator("S:X")
    assert _leakage(u @ gen @ u.T, "S") > 0.1


# ---- positivity ----------------------------------------------------------


@pytest.mark.parametrize("lb", [lb for lb in all_labels(2) if lb.kind in "CA"][::7] + list(all_labels(1)[6:]))
def test_correlation_and_active_alone_not_cp(lb):
    for t in (1e-3, 1e-2):
        assert not check_process(matrix_exp(t * elementary_generator(lb))).is_cp


@given(st.lists(st.floats(-2, 2), min_size=15, max_size=15))
def test_hamiltonian_always_cp(h):
    labels = [lb for lb in all_labels(2) if lb.kind == "H"]
    rates = ErrorGeneratorRates(2, dict(zip(labels, h)))
    assert check_process(process_from_rates(rates)).is_cptp


@given(st.lists(st.floats(0, 1), min_size=15, max_size=15))
def test_nonnegative_stochastic_cp(s):
    labels = [lb for lb in all_labels(2) if lb.kind == "S"]
    rates = ErrorGeneratorRates(2, dict(zip(labels, s)))
    assert check_process(process_from_rates(rates)).is_cptp


def test_negative_stochastic_not_cp():
    assert not check_process(process_from_rates(ErrorGeneratorRates(1, {"S:X": -0.01}))).is_cp


# ---- stochastic tensor & constraints -------------------------------------


def test_stochastic_tensor_symmetric():
    rates = random_lindbladian_rates(1, 0.01, 2)
    t = stochastic_tensor(rates)
    np.testing.assert_array_equal(t.matrix, t.matrix.T)
    assert t.is_psd()


def test_constraint_violation_reported():
    cons = stochastic_constraints(ErrorGeneratorRates(1, {"S:X": 0.01, "S:Z": 0.01, "C:X,Z": 0.02}))
    assert not cons.ok and not cons.tensor_psd
    (v,) = cons.violations
    assert str(v.label) == "C(X,Z)" and abs(v.value - 0.02) < 1e-15 and abs(v.bound - 0.01) < 1e-15


def test_constraint_boundary_dephasing():
    p = 0.01
    rates = ErrorGeneratorRates(1, {"S:X": p, "S:Z": p, "C:X,Z": p})
    cons = stochastic_constraints(rates)
    assert cons.ok and cons.tensor_psd and abs(cons.min_eigenvalue) < 1e-12
    # it is dephasing along the X+Z axis
    assert check_process(process_from_rates(rates)).is_cptp
    # the Bloch vector along (X+Z)/sqrt(2) is fixed, the orthogonal ones decay
    g = process_from_rates(rates)
    axis = np.array([0, 1, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(g @ axis, axis, atol=1e-12)
    assert np.linalg.norm(g @ np.array([0, 1, 0, -1])) < np.sqrt(2)


def test_active_bound():
    cons = stochastic_constraints(ErrorGeneratorRates(1, {"S:X": 0.01, "S:Y": 0.04, "A:X,Y": -0.03}))
    assert [str(v.label) for v in cons.violations] == ["A(X,Y)"]


def test_constraints_hold_for_divisible_channels():
    corpus = [amplitude_damping(g) for g in (1e-3, 1e-2, 0.1, 0.3)]
    corpus += [make_random_small(s, 0.02, n) for n in (1, 2) for s in range(10)]
    for g in corpus:
        assert stochastic_constraints(decompose(matrix_log(g))).ok


def test_indivisible_channel_has_negative_stochastic_rate():
    cons = stochastic_constraints(decompose(matrix_log(indivisible_xy(0.01))))
    assert cons.negative_rates and not cons.tensor_psd


# ---- rates container ------------------------------------------------------


def test_rates_json_round_trip():
    rates = random_lindbladian_rates(5, 0.01, 2)
    doc = json.loads(json.dumps(rates.to_json()))
    back = ErrorGeneratorRates.from_json(doc)
    assert back.rates == rates.rates and back.convention == rates.convention
    entry = next(e for e in doc["rates"] if e["kind"] == "C")
    assert set(entry) == {"kind", "p", "q", "rate"}


def test_rates_reject_mismatched_labels():
    with pytest.raises(QubitCountMismatch):
        ErrorGeneratorRates(2, {"H:X": 0.1})


@given(label_strategy(2), st.floats(-1, 1), st.floats(-1, 1))
def test_rates_vector_round_trip(lb, a, b):
    r = ErrorGeneratorRates(2, {lb: a, "S:ZZ": b})
    back = ErrorGeneratorRates.from_vector(2, r.to_vector(), floor=0.0)
    assert back.pruned(0.0).rates == r.pruned(0.0).rates
