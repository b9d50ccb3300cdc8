from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from conftest import EXPANDING, KAKUTANI, NEPHEW, SALEM, THUE_MORSE, corpus_members
from subdiag.core import parse_substitution
from subdiag.exact import (EXPANDING as KIND_EXPANDING, PISOT, SALEM as KIND_SALEM, ComplexSpectrumError,
                           FieldMismatchError, Matrix2, QuadVal, classify, eigenvalues,
                           letter_frequencies, pf_weight_vector, rational_left_eigenvector,
                           squarefree_decomposition, substitution_matrix)

SQRT5 = QuadVal.sqrt(5)
fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@st.composite
def quads(draw, D=5):
    return QuadVal(draw(fractions), draw(fractions), D)


class TestQuadVal:
    def test_normalisation(self):
        assert QuadVal(1, 2, 8) == QuadVal(1, 4, 2)
        assert QuadVal(1, 3, 9) == QuadVal(10)
        assert QuadVal(3, 0, 5).D == 0
        assert QuadVal.sqrt(16) == 4
        assert squarefree_decomposition(72) == (6, 2)

    def test_norm_and_conjugate(self):
        x = QuadVal(Fraction(3, 2), Fraction(1, 2), 5)
        assert x * x.conjugate() == x.norm() == 1

    def test_parse_and_str_roundtrip(self):
        for text in ["7/2+1/2*sqrt(5)", "7/2-1/2*sqrt(5)", "3", "-2/3", "1*sqrt(2)"]:
            x = QuadVal.parse(text)
            assert QuadVal.parse(str(x)) == x
        assert str(QuadVal(Fraction(7, 2), Fraction(-1, 2), 5)) == "7/2-1/2*sqrt(5)"

    def test_mixed_fields_rejected(self):
        with pytest.raises(FieldMismatchError):
            QuadVal.sqrt(2) + QuadVal.sqrt(3)

    def test_division(self):
        phi = (1 + SQRT5) / 2
        assert phi * phi == phi + 1
        assert 1 / phi == phi - 1
        assert phi ** -2 * phi ** 2 == 1

    def test_ordering(self):
        assert QuadVal(2) < SQRT5 < QuadVal(3)
        assert -SQRT5 < QuadVal(-2)
        assert abs(QuadVal(1, -1, 5)) == QuadVal(-1, 1, 5)


@given(quads(), quads(), quads())
def test_field_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x and x + y == y + x
    assert x * (y + z) == x * y + x * z
    assert x * x.conjugate() == x.a ** 2 - x.b ** 2 * 5


@given(quads(), quads())
def test_division_inverts_multiplication(x, y):
    if y:
        assert (x * y) / y == x


@given(fractions, fractions, st.sampled_from([2, 3, 5, 6, 7, 10, 13]))
def test_exact_sign_matches_high_precision(a, b, D):
    with mpmath.workdps(60):
        f = mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator * mpmath.sqrt(D)
        expected = 0 if f == 0 else (1 if f > 0 else -1)
    assert QuadVal(a, b, D).sign() == expected


def test_sign_near_tie():
    # a continued-fraction convergent of sqrt(2), off by about 2e-12
    x = QuadVal(Fraction(665857, 470832), -1, 2)
    assert x.sign() == 1


@pytest.mark.parametrize("spec,rows", [
    (SALEM, ((2, 1), (2, 3))),
    (NEPHEW, ((2, 1), (1, 1))),
    (EXPANDING, ((4, 1), (1, 3))),
])
def test_substitution_matrix(spec, rows):
    assert substitution_matrix(parse_substitution(spec)).rows == rows


def test_eigenvalues():
    assert eigenvalues(Matrix2(((2, 1), (2, 3)))) == (4, 1)
    half = Fraction(1, 2)
    assert eigenvalues(Matrix2(((4, 1), (1, 3)))) == (QuadVal(Fraction(7, 2), half, 5),
                                                      QuadVal(Fraction(7, 2), -half, 5))
    assert eigenvalues(Matrix2(((2, 1), (1, 1)))) == (QuadVal(Fraction(3, 2), half, 5),
                                                      QuadVal(Fraction(3, 2), -half, 5))
    with pytest.raises(ComplexSpectrumError):
        eigenvalues(Matrix2(((0, -1), (1, 0))))


def test_classify():
    assert classify(parse_substitution(NEPHEW)).kind == PISOT
    assert classify(parse_substitution(SALEM)).kind == KIND_SALEM
    assert classify(parse_substitution(EXPANDING)).kind == KIND_EXPANDING
    assert classify(parse_substitution("0->00;1->11")).kind == "Degenerate"


def test_pf_weight_vector_examples():
    assert tuple(pf_weight_vector(parse_substitution(SALEM))) == (1, 2)
    w = pf_weight_vector(parse_substitution(EXPANDING))
    assert w.w0 / w.w1 == (1 + SQRT5) / 2
    half = Fraction(1, 2)
    w = pf_weight_vector(parse_substitution(NEPHEW))
    assert tuple(w) == (QuadVal(Fraction(3, 2), half, 5), QuadVal(half, half, 5))


def test_letter_frequencies():
    assert letter_frequencies(parse_substitution(KAKUTANI)) == (Fraction(1, 2), Fraction(1, 2))
    assert letter_frequencies(parse_substitution(THUE_MORSE)) == (Fraction(1, 2), Fraction(1, 2))
    assert letter_frequencies(parse_substitution("0->011;1->101")) == (Fraction(1, 3), Fraction(2, 3))


def test_rational_left_eigenvector():
    m = [[2, 1, 1], [0, 2, 2], [0, 2, 2]]
    with pytest.raises(ValueError):
        rational_left_eigenvector([[1, 0], [0, 1]], 1)
    vec = rational_left_eigenvector([[1, 2], [1, 2]], 3)
    assert vec == [Fraction(1, 3), Fraction(2, 3)]
    assert sum(rational_left_eigenvector(m, 4)) == 1


# properties over the corpus ------------------------------------------------

def test_shape_pf_residual_is_zero(corpus):
    for s in corpus:
        m = substitution_matrix(s)
        lam, _ = eigenvalues(m)
        w = pf_weight_vector(s)
        w0, w1 = w
        assert m[0][0] * w0 + m[0][1] * w1 - lam * w0 == 0
        assert m[1][0] * w0 + m[1][1] * w1 - lam * w1 == 0


def test_cayley_hamilton(corpus):
    for s in corpus:
        m = substitution_matrix(s)
        sq = m @ m
        for i in range(2):
            for j in range(2):
                assert sq[i][j] - m.trace * m[i][j] + m.det * (i == j) == 0


def test_classify_agrees_with_floats(corpus):
    import numpy as np
    for s in corpus:
        m = substitution_matrix(s)
        ev = sorted(np.linalg.eigvals(np.array(m.rows, dtype=float)), key=abs)
        lam, lam_o = eigenvalues(m)
        assert abs(float(lam) - ev[1]) < 1e-9 and abs(float(lam_o) - ev[0]) < 1e-9
        kind = classify(s).kind
        modulus = abs(ev[0])
        if abs(modulus - 1) > 1e-9:
            assert kind == (PISOT if modulus < 1 else KIND_EXPANDING)
        else:
            assert kind == KIND_SALEM


@given(corpus_members)
def test_frequencies_are_left_eigenvector(s):
    m = substitution_matrix(s)
    lam, _ = eigenvalues(m)
    f0, f1 = letter_frequencies(s)
    assert f0 + f1 == 1 and f0 > 0 and f1 > 0
    assert f0 * m[0][0] + f1 * m[1][0] == lam * f0
