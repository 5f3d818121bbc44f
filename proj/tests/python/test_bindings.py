from fractions import Fraction

import pytest

import qekr


def test_gaussian_and_threshold():
    assert qekr.gaussian_binomial(4, 2, 2) == 35
    assert qekr.gaussian_binomial(3, 1, 2) == 7
    assert qekr.psd_threshold(3, 2) == Fraction(1, 8)
    assert qekr.psd_threshold(4, 2) == Fraction(1, 8)
    assert qekr.count_all(5, 2) == 374
    assert qekr.count_all(4, 3) == 212


def test_context_layer_masses():
    ctx = qekr.context(2, 3, "1/8")
    masses = [qekr.to_fraction(m) for m in ctx["layer_mass"]]
    assert masses == [Fraction(64, 135), Fraction(56, 135), Fraction(14, 135), Fraction(1, 135)]
    assert sum(masses) == 1
    assert ctx["mode"] == "exact"


def test_rational_argument_forms():
    assert qekr.measure_star(2, 4, Fraction(1, 8), 1) == Fraction(1, 9)
    assert qekr.measure_star(2, 4, "0.125", 1) == Fraction(1, 9)
    assert qekr.measure_star(2, 4, "1/8", 2) == Fraction(1, 45)
    with pytest.raises(TypeError):
        qekr.measure_star(2, 4, 0.125, 1)


def test_domain_errors_map_to_python():
    with pytest.raises(qekr.DomainError, match="sigma must be positive"):
        qekr.context(2, 3, "-1/2")
    with pytest.raises(qekr.QekrError):
        qekr.psd_threshold(0, 2)


def test_search_point_stars():
    r = qekr.search(3, 2, "1/16")
    assert r["complete"] is True
    assert qekr.to_fraction(r["optimum"]) == Fraction(1, 17)
    assert r["optima_count"] == 7


def test_search_threads_identical():
    assert qekr.search(4, 2, "1/16", threads=1) == qekr.search(4, 2, "1/16", threads=8)


def test_search_cap():
    with pytest.raises(qekr.CapExceeded):
        qekr.search(5, 2, "1/32", max_vertices=10)


def test_certify_example():
    c = qekr.certify(3, 2, "1/8")
    assert qekr.to_fraction(c["threshold"]) == Fraction(1, 8)
    assert c["condition"] is True
    assert [(z["i"], z["k"]) for z in c["zero_eigenvalues"]] == [(0, 1), (0, 3), (1, 1)]


def test_full_certificate():
    c = qekr.full_certificate(3, 2, "1/16")
    assert c["kernel"]["kernel_dimension"] == 8
    assert abs(c["point_star_duality"]["gap"]) < 1e-9
    assert qekr.to_fraction(c["hoffman"]["bound"]) == Fraction(1, 17)


def test_moments_exact():
    m = qekr.moments("1/2", 4, 2)
    assert m["mode"] == "exact"
    assert m["closed_form"]["mean_x"]["value"] == "1/1"


def test_tail_and_g_lower_bound():
    a = qekr.tail("above-half", "0.3", 20, 2, 1)
    b = qekr.tail("above-half", "0.3", 40, 2, 1)
    assert float(b["normalized"]["value"]) < float(a["normalized"]["value"])
    g = qekr.g_lower_bound("0.3", "0.3", 20, 2, 1)
    assert 0 < float(g["value"]) < 1


def test_counterexamples():
    pair = qekr.subspace_pair()
    assert pair["cross_intersecting"] is True
    sub = qekr.subset_check()
    assert (sub["lhs"], sub["rhs"]) == ("2210", "1089")
