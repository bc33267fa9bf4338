import pytest

from hirzebruch.arrangement import counting_identities, hirzebruch_check, intersection_lattice
from hirzebruch.catalog import CATALOG, build, catalog_names, coxeter_real, real_entries
from hirzebruch.search import arrangement_incidence_canonical


@pytest.mark.parametrize("name", catalog_names(include_stretch=True))
def test_entry_profile_and_counting(name):
    e = CATALOG[name]
    arr = e.build()
    lat = intersection_lattice(arr)
    assert dict(lat.t_profile) == e.expected_t_profile
    hz = hirzebruch_check(lat)
    assert hz.passed and hz.n == e.expected_n
    ids = counting_identities(lat.t_profile, hz.n)
    assert ids["sum_k_tk_ok"] and ids["pairs_ok"]
    assert (arr.is_real and arr.field.is_real) == e.real


def test_list_has_the_required_entries():
    names = catalog_names()
    assert len(names) >= 9
    for required in ["coxeter2", "coxeter3", "coxeter4", "coxeter5", "ceva3", "ceva4", "ceva5",
                     "extended_ceva2", "extended_ceva3", "extended_ceva4", "hesse"]:
        assert required in names
    assert "extended_hesse" not in names and "extended_hesse" in catalog_names(include_stretch=True)


def test_real_entries_line_counts():
    assert sorted(len(e.build().lines) for e in real_entries()) == [3, 6, 9, 15]


def test_extended_ceva2_is_the_square_arrangement():
    a, b = build("extended_ceva2"), coxeter_real(4)
    assert arrangement_incidence_canonical(a) == arrangement_incidence_canonical(b)


def test_build_accepts_larger_ceva():
    arr = build("ceva6")
    hz = hirzebruch_check(arr)
    assert hz.passed and hz.n == 6


def test_unknown_names():
    with pytest.raises(KeyError):
        build("nosuch")
    with pytest.raises(ValueError):
        coxeter_real(6)


def test_hesse_is_closed_under_conjugation():
    arr = build("hesse")
    assert not arr.is_real
    assert {l.key() for l in arr.conj().lines} == {l.key() for l in arr.lines}
