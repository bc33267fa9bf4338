import pytest

from hirzebruch.catalog import CATALOG, coxeter_real
from hirzebruch.search import (
    SOUNDNESS,
    enumerate_types,
    iso_match,
    t_profile_solver,
)


def _counts_ok(n, t):
    N = 3 * n
    return (
        sum(k * v for k, v in t.items()) == 3 * n * (n + 1) and
        sum(v * k * (k - 1) // 2 for k, v in t.items()) == N * (N - 1) // 2
    )


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_t_profiles_satisfy_counting(n):
    profs = t_profile_solver(n)
    assert profs
    for t in profs:
        assert _counts_ok(n, t), t
        assert max(t) <= 5


def test_t_profiles_known():
    assert t_profile_solver(2) == [{2: 3, 3: 4}]
    assert {2: 6, 3: 4, 4: 3} in t_profile_solver(3)
    assert {2: 15, 3: 10, 5: 6} in t_profile_solver(5)


def test_search_n1():
    r = enumerate_types(1, "paper_pruned")
    assert len(r.types) == 1
    assert r.certificate()["soundness"] == "pruning not applied for n = 1"


@pytest.mark.parametrize("mode", ["counting_only", "paper_pruned"])
def test_search_n2_finds_coxeter3(mode):
    r = enumerate_types(2, mode)
    assert len(r.types) == 1 and not r.exhausted
    t = r.types[0]
    assert t.hirzebruch_counts_ok()
    assert iso_match(t, coxeter_real(3))
    assert not iso_match(t, coxeter_real(4))


def test_search_n3_pruned_finds_coxeter4_only():
    r = enumerate_types(3, "paper_pruned")
    assert len(r.types) == 1
    assert iso_match(r.types[0], coxeter_real(4))
    assert iso_match(r.types[0], CATALOG["extended_ceva2"].build())
    statuses = {tuple(sorted(p["t_profile"].items())): p["status"] for p in r.certificate()["profiles"]}
    assert statuses[(("2", 6), ("3", 4), ("4", 3))] == "found"


def test_certificate_is_deterministic():
    a = enumerate_types(3, "paper_pruned").certificate(timings=False)
    b = enumerate_types(3, "paper_pruned").certificate(timings=False)
    assert a == b
    assert a["schema"] == "hirzebruch.search-certificate/1"
    assert a["soundness"] == SOUNDNESS["paper_pruned"]


def test_parallel_matches_serial():
    a = enumerate_types(3, "paper_pruned", jobs=1)
    b = enumerate_types(3, "paper_pruned", jobs=2)
    assert {t.canonical for t in a.types} == {t.canonical for t in b.types}
    assert a.nodes == b.nodes


def test_budget_exhaustion_is_reported():
    r = enumerate_types(3, "counting_only", budget=500)
    assert r.exhausted
    cert = r.certificate(timings=False)
    assert cert["exhausted_budget"]
    assert all(p["status"] in ("found", "not reached") for p in cert["profiles"])


def test_type_summary_n2():
    t = enumerate_types(2, "paper_pruned").types[0]
    s = t.summary()
    assert s["faces"] == 12 and s["t_profile"] == {"2": 3, "3": 4}
    assert len(s["points"]) == 7 and all(len(w) == 3 for w in s["wires"])


def test_bad_mode():
    with pytest.raises(ValueError):
        enumerate_types(2, "everything")
