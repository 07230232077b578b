import pytest

from davenport.bounds import (
    EXCEPTIONAL_PM,
    ags_bounds,
    construction_lower,
    decomposition_value,
    e_constant,
    exact_value,
    generic_upper,
    star_lower,
)
from davenport.groups import InvalidGroup, canonicalize, decompositions, enumerate_groups
from davenport.sumset import verify_certificate
from davenport.weights import make_weightset


def report(moduli, spec="pm"):
    G = canonicalize(moduli)
    return exact_value(G, make_weightset(spec, G))


# -- ags_bounds / decomposition_value / star_lower ---------------------------------


def test_ags_c3_c759():
    assert ags_bounds(canonicalize([3, 759])) == (11, 12)


@pytest.mark.parametrize("k", range(1, 12))
def test_ags_cyclic_2_power(k):
    assert ags_bounds(canonicalize([2**k])) == (k + 1, k + 1)


def test_ags_c897_squared():
    assert ags_bounds(canonicalize([897, 897])) == (19, 20)


@pytest.mark.parametrize("parts, value", [([33, 69], 12), ([3, 759], 11), ([39, 69, 299], 20)])
def test_decomposition_value(parts, value):
    assert decomposition_value(parts) == value


def test_star_c3_c759():
    assert star_lower(canonicalize([3, 759])) == (12, (33, 69))


def test_star_c897_squared():
    assert star_lower(canonicalize([897, 897])) == (20, (39, 69, 299))


@pytest.mark.parametrize("a, b", [(1, 1), (1, 3), (2, 5), (4, 4)])
def test_star_two_powers(a, b):
    assert star_lower(canonicalize([2**a, 2**b])) == (a + b + 1, (2**a, 2**b))


def test_star_trivial():
    assert star_lower(canonicalize([])) == (1, ())


def test_star_rank_cap():
    with pytest.raises(InvalidGroup):
        star_lower(canonicalize([2] * 25))


def test_star_is_maximal_over_all_decompositions():
    for G in enumerate_groups(400):
        if G.is_trivial or G.total_rank > 6:
            continue
        star, parts = star_lower(G)
        values = [decomposition_value(d.parts) for d in decompositions(G)]
        assert star == max(values)
        assert canonicalize(parts) == G
        # tie-break: fewest parts, then lexicographically least sorted parts
        ties = sorted((len(d.parts), tuple(sorted(d.parts))) for d in decompositions(G)
                      if decomposition_value(d.parts) == star)
        assert (len(parts), parts) == ties[0]


@pytest.mark.parametrize("moduli", [[30, 30], [3, 759], [6, 6, 210], [4, 12, 60]])
def test_star_sandwich(moduli):
    G = canonicalize(moduli)
    chain, up = ags_bounds(G)
    assert chain <= star_lower(G)[0] <= up


# -- generic upper -------------------------------------------------------------------------


def test_generic_upper():
    G = canonicalize([3, 3, 9])
    assert generic_upper(G, make_weightset("pm", G))[0] == 7
    assert generic_upper(G, make_weightset([1], G))[0] == 81
    assert generic_upper(G, make_weightset([3], G))[0] == 3
    assert generic_upper(G, make_weightset([0, 1], G))[0] == 1


# -- exact_value ---------------------------------------------------------------------------


def test_c3_4_elementary():
    r = report([3, 3, 3, 3])
    assert (r.status.kind, r.status.value, r.status.method) == ("Exact", 5, "elementary-3")


def test_c7_squared_rank2_rule():
    r = report([7, 7])
    assert r.status.kind == "Exact" and r.status.value == 6
    assert "rank2_pm(7,7)" in r.status.method


def test_c5_c15_bracket():
    r = report([5, 15])
    assert (r.status.kind, r.status.lo, r.status.hi) == ("Bracket", 6, 7)


def test_c3_c6_exact():
    r = report([3, 6])
    assert r.status.kind == "Exact" and r.status.value == 5


def test_c23_squared_bracket():
    r = report([23, 23])
    assert (r.status.kind, r.status.lo, r.status.hi) == ("Bracket", 9, 10)


@pytest.mark.parametrize("moduli", [[2, 4], [9, 9], [3, 3, 9], [5, 10], [7], [6, 6, 6]])
def test_full_weights_rank_exp(moduli):
    G = canonicalize(moduli)
    r = exact_value(G, make_weightset("full", G))
    assert r.status.kind == "Exact"
    assert r.status.value == G.rank_of(G.exponent) + 1


def test_exceptional_table_values():
    for moduli, (v, _) in EXCEPTIONAL_PM.items():
        assert report(list(moduli)).status.value == v


def test_degenerate_and_trivial():
    assert report([6], [0, 1]).status.value == 1
    assert report([6], [6]).status.value == 1
    assert report([], "pm").status.value == 1


def test_reduction_through_dilation():
    # {2, -2} on C4 + C8 is plus-minus on C2 + C4: 2-group, value log2(8) + 1
    r = report([4, 8], [2, -2])
    assert r.status.value == 4
    for b in r.lower:
        assert b.certificate.group.moduli == (4, 8)
        assert b.certificate.weights.residues == (2, 6)
        assert verify_certificate(b.certificate).valid


def test_unit_scaled_plus_minus():
    r = report([7, 7], [3, 4])
    assert r.status.value == 6
    assert all(verify_certificate(b.certificate).valid for b in r.lower)


def test_single_unit_cyclic_is_exact():
    assert report([12], [1]).status.value == 12
    assert report([12], [5]).status.value == 12
    r = report([4, 4], [1])
    assert r.status.kind == "Bracket" and r.status.lo == 7


def test_custom_weights_bracket_is_sound(oracle):
    for G in enumerate_groups(16):
        if G.is_trivial:
            continue
        for spec in ([1, 2], [2, 3], [1, 3], [2]):
            A = make_weightset(spec, G)
            st = exact_value(G, A).status
            v = oracle(G, A)
            assert st.lo <= v <= st.hi, (G, spec)
            if st.kind == "Exact":
                assert st.value == v


def test_exact_matches_oracle_up_to_16(oracle):
    for G in enumerate_groups(16):
        for spec in ("pm", "full", [1]):
            A = make_weightset(spec, G)
            st = exact_value(G, A).status
            v = oracle(G, A)
            assert st.lo <= v <= st.hi
            if st.kind == "Exact":
                assert st.value == v, (G, spec)


def test_invariants_on_all_groups_up_to_300():
    for G in enumerate_groups(300):
        r = exact_value(G, make_weightset("pm", G))
        lows = [b.value for b in r.lower]
        ups = [b.value for b in r.upper]
        assert max(lows) <= min(ups)
        for b in r.lower:
            if b.certificate is not None:
                assert len(b.certificate) + 1 >= b.value
                assert verify_certificate(b.certificate).valid
        if G.is_trivial:
            continue
        star = star_lower(G)[0]
        if r.status.kind == "Exact":
            v = r.status.value
            assert star <= v <= min(star + G.rank - 1, ags_bounds(G)[1])


def test_composition_soundness():
    # the composed lower bound is at least the sum over its blocks
    for moduli in ([7, 7, 7, 7], [3, 6, 6], [2, 6, 6], [3, 3, 6]):
        G = canonicalize(moduli)
        value, plan = construction_lower(G)
        assert value == plan.length() + 1
        for idx, method in plan.blocks:
            H = canonicalize([plan.parts[i] for i in idx])
            assert exact_value(H, make_weightset("pm", H)).status.lo <= ags_bounds(H)[1]


def test_c7_4_gap_over_star():
    G = canonicalize([7, 7, 7, 7])
    value, _ = construction_lower(G)
    assert value == 11
    assert value - star_lower(G)[0] >= 2


def test_e_constant():
    G = canonicalize([9])
    assert e_constant(G, make_weightset("pm", G)).value == 12
    G = canonicalize([3, 3])
    assert e_constant(G, make_weightset("pm", G)).value == 11
    G = canonicalize([5, 15])
    st = e_constant(G, make_weightset("pm", G))
    assert (st.kind, st.lo, st.hi) == ("Bracket", 80, 81)


def test_report_json():
    out = report([5, 15]).to_json()
    assert out["status"] == "Bracket" and out["lower"] == 6 and out["upper"] == 7
    assert all("method" in b for b in out["lower_bounds"])
    assert any("certificate" in b for b in out["lower_bounds"])
    out = report([3, 3, 9]).to_json()
    assert out["status"] == "Exact" and out["value"] == 6


def test_huge_groups_without_certificates():
    r = report([7] * 12)
    assert r.status.kind == "Bracket"
    assert all(b.certificate is None for b in r.lower)
    assert report([2] * 30).status.value == 31
