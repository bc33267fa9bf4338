import pytest

from hirzebruch.arrangement import Arrangement, counting_identities, hirzebruch_check, intersection_lattice
from hirzebruch.exact import QQ, ProjLine


def lines(*cs):
    return Arrangement(QQ, [ProjLine(c) for c in cs])


def test_generic_four_lines_fail_with_reason():
    arr = lines((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))
    lat = intersection_lattice(arr)
    assert lat.t_profile == {2: 6}
    r = hirzebruch_check(lat)
    assert not r.passed and r.reason == "line count not 3n"


def test_three_generic_lines_are_degenerate_pass():
    r = hirzebruch_check(lines((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert r.passed and r.n == 1 and r.degenerate


def test_six_generic_lines_fail_per_line_count():
    arr = lines((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3), (1, -3, 7))
    r = hirzebruch_check(arr)
    assert not r.passed and r.n is None and set(r.per_line_counts) == {5}


def test_pencil_is_one_point():
    lat = intersection_lattice(lines((1, 0, 0), (0, 1, 0), (1, 1, 0)))
    assert lat.t_profile == {3: 1}
    assert lat.per_line == ((0,), (0,), (0,))


def test_duplicate_lines_rejected():
    with pytest.raises(ValueError):
        lines((1, 0, 0), (2, 0, 0))


def test_counting_identities():
    ok = counting_identities({2: 6, 3: 4, 4: 3}, 3)
    assert ok["sum_k_tk_ok"] and ok["pairs_ok"] and ok["sum_k_tk"] == 36 and ok["pairs"] == 36
    bad = counting_identities({2: 6, 3: 4}, 3)
    assert not bad["sum_k_tk_ok"]


def test_conjugate_of_real_arrangement_is_itself(real_catalog):
    arr = real_catalog[4]
    assert arr.is_real
    assert {l.key() for l in arr.conj().lines} == {l.key() for l in arr.lines}
