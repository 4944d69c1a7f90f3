import numpy as np
import pytest
from hypothesis import given, strategies as st

from multuniform.experiments import (
    Coloring,
    DomainError,
    coloring_search,
    degenerate_count,
    dilate,
    folner_set,
    mixture_average,
    mixture_count_oracle,
    multiplicative_density,
    parse_coloring,
    parse_predicate,
    recurrence_average,
    residue_coloring,
    seven_adic_coloring,
    theta_count_naive,
    theta_set,
    trivial_coloring,
    von_neumann_probe,
)
from multuniform.gowers import LinearFormsPattern
from multuniform.multiplicative import MultiplicativeFunction, named_family
from multuniform.quadforms import EllPattern, QuadraticForm, normalize_to_ell
from multuniform.ring import select_modulus

PAT = LinearFormsPattern(1, 2, 3)
patterns = st.lists(st.integers(1, 5), min_size=3, max_size=3, unique=True).map(lambda l: LinearFormsPattern(*l))


def test_theta_set_example():
    th = theta_set(10, PAT)
    assert len(th) == 12
    assert all(1 <= m + l * n <= 10 for m, n in th.pairs for l in (0, 1, 2, 3))


@given(st.integers(1, 200), patterns)
def test_theta_set_matches_double_loop(N, pat):
    assert len(theta_set(N, pat)) == theta_count_naive(N, pat)


@given(st.integers(1, 300), patterns)
def test_recurrence_trivial(N, pat):
    if N < 1 + max(pat.coeffs):
        with pytest.raises(DomainError):
            recurrence_average(MultiplicativeFunction.one(), pat, N)
    else:
        assert recurrence_average(MultiplicativeFunction.one(), pat, N) == 1


def test_recurrence_matches_mixture_rescaled():
    # E over Theta_N equals p^2 / |Theta_N| times the average over Z_p
    N = 60
    p = select_modulus(N, PAT.ell).ntilde
    size = len(theta_set(N, PAT))
    for chi in named_family():
        lhs = recurrence_average(chi, PAT, N)
        rhs = mixture_average([(chi, 1.0)], PAT, N) * p * p / size
        assert abs(lhs - rhs) < 1e-12


def test_degenerate_count():
    # m(m+n) = (m+2n)(m+3n) has no positive solutions
    assert degenerate_count(PAT, 100) == 0
    assert degenerate_count(LinearFormsPattern(5, 1, 2), 60) == sum(
        1 for m in range(1, 61) for n in range(1, 61)
        if m + 5 * n <= 60 and m * (m + 5 * n) == (m + n) * (m + 2 * n)
    )


@pytest.mark.parametrize("N", [10, 100])
def test_mixture_counting(N):
    p = select_modulus(N, PAT.ell).ntilde
    val = mixture_average([(MultiplicativeFunction.one(), 1.0)], PAT, N)
    assert abs(val * p * p - mixture_count_oracle(PAT, N, p)) < 1e-6
    assert abs(val * p * p - len(theta_set(N, PAT))) < 1e-6


def test_mixture_zero_and_negative_weights():
    assert mixture_average([(MultiplicativeFunction.one(), 0.0)], PAT, 20) == 0
    with pytest.raises(ValueError):
        mixture_average([(MultiplicativeFunction.one(), -1.0)], PAT, 20)


def test_indicator_like_mixture_positive():
    # a half atom at chi = 1 next to any chi keeps the average positive
    for chi in named_family():
        for N in (100, 500):
            val = mixture_average([(MultiplicativeFunction.one(), 0.5), (chi, 0.5)], PAT, N)
            assert val.real > 0


def test_folner_set():
    assert folner_set(2, 1) == [1, 2, 3, 6]
    assert len(folner_set(3, 10)) == 11**3
    with pytest.raises(ValueError):
        folner_set(8, 9)


def test_multiplicative_density():
    assert multiplicative_density(lambda x: x % 2 == 1, 3, 10) == pytest.approx(1 / 11)
    assert multiplicative_density(parse_predicate("all"), 2, 5) == 1
    # dilation invariance sharpens as the exponent cap grows
    pred = parse_predicate("odd")
    gaps = [abs(multiplicative_density(dilate(pred, 3), 3, c) - multiplicative_density(pred, 3, c)) for c in (4, 16)]
    assert gaps[1] <= gaps[0]
    with pytest.raises(ValueError):
        parse_predicate("prime")


def test_refinement_does_not_raise_max_density():
    for coarse, fine in ((2, 4), (3, 6), (2, 6)):
        def cells(q):
            return [multiplicative_density(lambda x, r=r: x % q == r, 3, 8) for r in range(q)]
        assert max(cells(fine)) <= max(cells(coarse)) + 1e-12


def test_colorings():
    c = seven_adic_coloring()
    assert [c.cell(x) for x in (1, 6, 7, 14, 49 * 3, 8)] == [0, 5, 0, 1, 2, 0]
    assert list(residue_coloring(3).cells(5)) == [1, 2, 0, 1, 2]
    assert set(trivial_coloring().cells(10)) == {0}
    assert parse_coloring("residue:5").num_cells == 5
    with pytest.raises(ValueError):
        parse_coloring("rainbow")
    with pytest.raises(ValueError):
        Coloring(2, lambda x: np.full(len(x), 3), "bad").cells(4)


def test_no_solutions_three():
    assert coloring_search(QuadraticForm(1, 1, -3), residue_coloring(2), 500) == []


def test_seven_adic_blocks_five():
    assert coloring_search(QuadraticForm(1, 1, -5), seven_adic_coloring(), 1000) == []
    # with a single cell there are plenty, e.g. 1^2 + 2^2 = 5 * 1^2
    hits = coloring_search(QuadraticForm(1, 1, -5), trivial_coloring(), 50)
    assert hits[0].x == 1 and hits[0].y == 2 and hits[0].n == 1


def test_sixteen_nine_hits_verified():
    p = QuadraticForm(16, 9, -1)
    hits = coloring_search(p, trivial_coloring(), 200)
    assert hits
    assert hits == sorted(hits)
    for h in hits:
        assert h.x != h.y and p(h.x, h.y, h.n) == 0 and h.n > 0
    assert any((h.x, h.y) == (28, 5) for h in coloring_search(p, trivial_coloring(), 30))


def test_pattern_search():
    p = QuadraticForm(16, 9, -1)
    pat, _ = normalize_to_ell(p)
    hits = coloring_search(pat, residue_coloring(2), 4, form=p)
    assert hits
    for h in hits:
        assert (h.x, h.y) == pat.xy(*h.kmn) and p(h.x, h.y, h.n) == 0 and h.x % 2 == h.y % 2
    with pytest.raises(ValueError):
        coloring_search(EllPattern(1, 3, 2, 6), trivial_coloring(), 1)


def test_von_neumann_probe_stable():
    constants = [von_neumann_probe(seed, instances=8)["constant"] for seed in range(3)]
    assert max(constants) <= 3 * min(constants)
