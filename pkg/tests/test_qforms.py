import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core import qforms
from src.errors import DiscriminantError, SquareDiscriminantError
from src.models import GroupElement, QForm, UpperHalfPoint

coefficients = st.integers(min_value=-50, max_value=50)


@st.composite
def forms(draw):
    a, b, c = draw(coefficients), draw(coefficients), draw(coefficients)
    return QForm(a, b, c)


@st.composite
def elements(draw):
    """Случайный элемент SL2(Z) как произведение степеней S и T"""
    g = qforms.IDENTITY
    for power in draw(st.lists(st.integers(min_value=-3, max_value=3), min_size=1, max_size=4)):
        g = g * GroupElement(1, power, 0, 1) * qforms.S
    return g


@given(forms(), elements())
@settings(max_examples=200, deadline=None)
def test_action_preserves_discriminant(Q, g):
    """Тест: b² − 4ac не меняется под действием SL2(Z)"""
    assert qforms.discriminant(qforms.act(Q, g)) == qforms.discriminant(Q)


@given(forms(), elements(), elements())
@settings(max_examples=200, deadline=None)
def test_action_is_right_action(Q, g, h):
    """Тест: (Q∘g)∘h = Q∘(gh)"""
    assert qforms.act(qforms.act(Q, g), h) == qforms.act(Q, qforms.compose(g, h))


def test_norm_identity():
    """Тест: |Q(z,1)|² = y²(D + Q_z²)"""
    Q = QForm(2, 3, -1)
    z = UpperHalfPoint(0.3, 1.1)
    D = qforms.discriminant(Q)
    value = qforms.evaluate(Q, z)
    q_z = qforms.geodesic_invariant(Q, z)
    assert abs(abs(value) ** 2 - z.y ** 2 * (D + q_z ** 2)) < 1e-12 * abs(value) ** 2


def test_enumeration_example_at_i():
    """Тест: D = 5, z = i, R = 3 дают ровно 8 форм, граничные формы включены"""
    found = qforms.enumerate_bounded(5, UpperHalfPoint(0.0, 1.0), 3.0)

    assert len(found) == 8
    assert set(found) == {
        QForm(1, 1, -1), QForm(-1, 1, 1), QForm(1, -1, -1), QForm(-1, -1, 1),
        QForm(1, 3, 1), QForm(-1, 3, -1), QForm(1, -3, 1), QForm(-1, -3, -1),
    }
    for Q in found:
        assert abs(qforms.evaluate(Q, UpperHalfPoint(0.0, 1.0))) <= 3.0 + 1e-12


def test_enumeration_is_complete():
    """Тест: перечисление совпадает с перебором по коробке коэффициентов"""
    z = UpperHalfPoint(0.2, 0.8)
    R = 6.0
    brute = set()
    for a in range(-30, 31):
        for b in range(-30, 31):
            if a == 0 or (b * b - 8) % (4 * a):
                continue
            Q = QForm(a, b, (b * b - 8) // (4 * a))
            if abs(qforms.evaluate(Q, z)) <= R:
                brute.add(Q)
    assert set(qforms.enumerate_bounded(8, z, R)) == brute


def test_enumeration_conjugate_symmetry():
    """Тест: при z ↦ −z̄ формы [a,b,c] переходят в [a,−b,c]"""
    z = UpperHalfPoint(0.3, 1.1)
    mirrored = UpperHalfPoint(-0.3, 1.1)
    left = {QForm(Q.a, -Q.b, Q.c) for Q in qforms.enumerate_bounded(13, z, 20.0)}
    assert left == set(qforms.enumerate_bounded(13, mirrored, 20.0))


def test_radius_below_minimum_is_empty():
    """Тест: при R < √D·y форм нет"""
    assert qforms.enumerate_bounded(5, UpperHalfPoint(0.0, 1.0), 2.0) == []


def test_canonical_order_starts_with_small_a():
    found = qforms.enumerate_bounded(5, UpperHalfPoint(0.0, 1.0), 10.0)
    magnitudes = [abs(Q.a) for Q in found]
    assert magnitudes == sorted(magnitudes)


@pytest.mark.parametrize("D", [0, -3, 2, 7, 10])
def test_non_discriminant_rejected(D):
    with pytest.raises(DiscriminantError):
        qforms.enumerate_bounded(D, UpperHalfPoint(0.0, 1.0), 5.0)


def test_square_discriminant_needs_permission():
    """Тест: квадратный D отвергается, а с allow_square даёт семейство a = 0"""
    z = UpperHalfPoint(0.0, 1.0)
    with pytest.raises(SquareDiscriminantError):
        qforms.enumerate_bounded(4, z, 5.0)

    found = qforms.enumerate_bounded(4, z, 5.0, allow_square=True)
    assert QForm(0, 2, 0) in found
    assert all(qforms.discriminant(Q) == 4 for Q in found)


def test_mobius_and_cocycle():
    """Тест: Sz = −1/z, j(S, z) = z"""
    z = UpperHalfPoint(0.3, 1.1)
    assert abs(qforms.mobius(qforms.S, z).z - (-1 / z.z)) < 1e-15
    assert qforms.cocycle(qforms.S, z) == z.z


def test_form_rows_columns():
    rows = qforms.form_rows([QForm(1, 3, 1)], UpperHalfPoint(0.0, 1.0))
    assert list(rows[0]) == ["a", "b", "c", "re(Q)", "im(Q)", "Qz"]
    assert rows[0]["Qz"] == 2.0
