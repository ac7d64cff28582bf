import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszulity import FieldElement, Matrix, kernel_basis, rref, solve
from koszulity import _kernels_py
from koszulity.errors import InputError

try:
    from koszulity import _kernels

    BACKENDS = [_kernels_py, _kernels]
except ImportError:
    BACKENDS = [_kernels_py]


# -- frozen examples ---------------------------------------------------------


def test_rref_identity():
    m = Matrix.identity(2, 7)
    red, pivots = rref(m)
    assert red.to_rows() == [[1, 0], [0, 1]]
    assert pivots == [0, 1]


def test_rref_zero():
    m = Matrix(2, 2, 7)
    red, pivots = rref(m)
    assert red.to_rows() == [[0, 0], [0, 0]]
    assert pivots == []


def test_rref_rank_one_mod_7():
    # hand Gaussian elimination mod 7
    m = Matrix.from_rows([[1, 2], [2, 4]], 7)
    red, pivots = rref(m)
    assert red.to_rows() == [[1, 2], [0, 0]]
    assert pivots == [0]


def test_kernel_identity_empty():
    assert kernel_basis(Matrix.identity(2, 7)) == []


def test_kernel_zero_full():
    assert len(kernel_basis(Matrix(2, 3, 7))) == 3


def test_kernel_one_equation_mod_7():
    # solve x + 2y = 0 by hand: y = 1, x = -2 = 5
    vecs = kernel_basis(Matrix.from_rows([[1, 2]], 7))
    assert vecs == [[5, 1]]


def test_solve_identity():
    assert solve(Matrix.identity(3, 7), [1, 2, 3]) == [1, 2, 3]


def test_solve_inconsistent():
    assert solve(Matrix(2, 2, 7), [1, 0]) is None


def test_solve_scalar_mod_7():
    # modular inverse: 2^-1 = 4, 4*3 = 12 = 5 mod 7
    assert solve(Matrix.from_rows([[2]], 7), [3]) == [5]


def test_solve_dimension_mismatch():
    with pytest.raises(InputError):
        solve(Matrix.identity(2, 7), [1, 2, 3])


# -- backend agreement --------------------------------------------------------


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_backend_rref_agrees_with_reference(impl):
    from array import array

    rows, cols, p = 5, 7, 101
    seed = 12345
    vals = []
    for _ in range(rows * cols):
        seed = (seed * 1103515245 + 12345) % (1 << 31)
        vals.append(seed % p)
    buf = array("q", vals)
    expect = list(vals)
    ref_pivots = _kernels_py.rref_inplace(expect, rows, cols, p)
    pivots = impl.rref_inplace(buf, rows, cols, p)
    assert list(pivots) == list(ref_pivots)
    assert list(buf) == expect


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_backend_matmul_agrees(impl):
    from array import array

    m, k, n, p = 4, 5, 3, 97
    a = array("q", [(i * 7 + 3) % p for i in range(m * k)])
    b = array("q", [(i * 11 + 5) % p for i in range(k * n)])
    out = array("q", bytes(8 * m * n))
    impl.matmul_mod(out, a, b, m, k, n, p)
    ref = [0] * (m * n)
    _kernels_py.matmul_mod(ref, list(a), list(b), m, k, n, p)
    assert list(out) == ref


# -- properties ---------------------------------------------------------------

small_prime = st.sampled_from([2, 3, 5, 7, 101])


@st.composite
def matrices(draw):
    p = draw(small_prime)
    rows = draw(st.integers(1, 6))
    cols = draw(st.integers(1, 6))
    data = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    return Matrix(rows, cols, p, data)


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_rank_nullity_and_kernel_annihilation(m):
    ker = m.kernel_basis()
    assert m.rank() + len(ker) == m.cols
    for vec in ker:
        assert m.apply(vec) == [0] * m.rows


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_rref_idempotent(m):
    red, _ = m.rref()
    again, _ = red.rref()
    assert again == red


@given(matrices(), st.data())
@settings(max_examples=100, deadline=None)
def test_solve_kernel_consistency(m, data):
    # pick b in the column space, then x + any kernel vector still solves
    coeffs = data.draw(
        st.lists(st.integers(0, m.char - 1), min_size=m.cols, max_size=m.cols)
    )
    b = m.apply(coeffs)
    x = m.solve(b)
    assert x is not None
    assert m.apply(x) == b
    for vec in m.kernel_basis():
        shifted = [(xi + vi) % m.char for xi, vi in zip(x, vec)]
        assert m.apply(shifted) == b


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rref_preserves_row_space(m):
    red, pivots = m.rref()
    assert pivots == sorted(pivots)
    assert len(set(pivots)) == len(pivots)
    # row spaces agree: each has the other's rank after stacking
    stacked = Matrix(
        m.rows * 2, m.cols, m.char, list(m.data) + list(red.data)
    )
    assert stacked.rank() == m.rank()


# -- field elements -------------------------------------------------------------


def test_field_element_arithmetic():
    a = FieldElement(5, 7)
    b = FieldElement(4, 7)
    assert a + b == FieldElement(2, 7)
    assert a - b == 1
    assert a * b == FieldElement(6, 7)
    assert (a / b).value == (5 * 2) % 7  # 4^-1 = 2 mod 7
    assert -a == FieldElement(2, 7)
    assert a.inverse() * a == 1


def test_field_element_requires_prime():
    with pytest.raises(InputError):
        FieldElement(1, 6)


@given(st.sampled_from([2, 3, 5, 32003]), st.integers(-50, 50), st.integers(-50, 50))
def test_field_element_closure(p, x, y):
    a, b = FieldElement(x, p), FieldElement(y, p)
    assert 0 <= (a + b).value < p
    assert 0 <= (a * b).value < p
    assert (a - b) + b == a
    if b.value:
        assert (a / b) * b == a


@given(matrices(), st.data())
@settings(max_examples=80, deadline=None)
def test_solver_matches_matrix_solve(m, data):
    from koszulity.linalg import Solver

    solver = Solver(m)
    coeffs = data.draw(
        st.lists(st.integers(0, m.char - 1), min_size=m.cols, max_size=m.cols)
    )
    b_in = m.apply(coeffs)
    assert solver.solve(b_in) == m.solve(b_in)
    b_any = data.draw(
        st.lists(st.integers(0, m.char - 1), min_size=m.rows, max_size=m.rows)
    )
    assert solver.solve(b_any) == m.solve(b_any)
