from fractions import Fraction
from itertools import combinations

import pytest

import treepoly


def test_five_leaf_example_density():
    row = treepoly.density_row("((*,*),((*,*),*))", 4)
    assert list(row.values()) == [Fraction(2, 5), Fraction(3, 5)]
    assert [treepoly.shape_name(s) for s in row] == ["Comb_4", "Bal_4"]


def test_shape_counts():
    assert [len(treepoly.shapes(n)) for n in range(1, 9)] == [1, 1, 1, 2, 3, 6, 11, 23]
    assert treepoly.shape_count(30) == 1406818759
    assert treepoly.canonical("((*,*),*)") == "(*,(*,*))"


def test_labelings_sum_to_double_factorial():
    for n in range(2, 9):
        odd = 1
        for k in range(1, 2 * n - 2, 2):
            odd *= k
        assert sum(treepoly.labeling_count(s) for s in treepoly.shapes(n)) == odd


def test_pattern_counts_sum_to_binomial():
    tree = "(((*,*),(*,*)),((*,*),(*,(*,*))))"
    total = sum(treepoly.count_pattern(tree, p) for p in treepoly.shapes(5))
    assert total == len(list(combinations(range(9), 5)))


def test_beta_model():
    assert list(treepoly.beta_distribution(4, "0").values()) == [Fraction(2, 3), Fraction(1, 3)]
    assert list(treepoly.beta_distribution(5, "inf").values()) == [Fraction(4, 21), Fraction(1, 7), Fraction(2, 3)]
    assert treepoly.derive_lower_rule(treepoly.beta_rule(6, "1/2")) == treepoly.beta_rule(5, "1/2")
    with pytest.raises(ValueError):
        treepoly.beta_distribution(4, "-3")


def test_marginalize_point_mass():
    bal5 = treepoly.shapes(5)[2]
    assert treepoly.marginalize(5, {bal5: 1}, 4) == treepoly.density_row(bal5, 4)


def test_multinomial_tripod():
    t = [Fraction(1, 5), Fraction(1, 2), Fraction(3, 10)]
    dist = treepoly.multinomial_distribution("(*,*)", t, 5)
    bal5 = treepoly.shapes(5)[2]
    assert dist[bal5] == 10 * t[1] ** 3 * t[2] ** 2 + 10 * t[1] ** 2 * t[2] ** 3
    assert sum(dist.values()) == 1


def test_sampling_polytope():
    poly = treepoly.sampling_polytope(5, 7)
    assert poly["dim"] == 3
    assert len(poly["points"]) == 11
    assert len(poly["vertices"]) == 7
    gens = [poly["points"][i] for i in poly["vertices"]]
    assert treepoly.in_convex_hull(gens, [Fraction(4, 21), Fraction(1, 7), Fraction(2, 3)])
    assert not treepoly.in_convex_hull(gens, [0, 1, 0])


def test_verify_claim():
    assert "beta-limits" in treepoly.claim_ids()
    report = treepoly.verify("beta-limits")
    assert report["status"] == "pass"
    with pytest.raises(ValueError):
        treepoly.verify("no-such-claim")


def test_parse_error_is_value_error():
    with pytest.raises(ValueError):
        treepoly.canonical("(*,*")
