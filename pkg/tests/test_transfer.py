"""Transfer systems: closure, enumeration, compatibility, hulls, J-local."""

import itertools

import pytest

from transop import transfer
from transop.errors import BadEdge, BoundExceeded, LatticeMismatch
from transop.groups import GSet, coset_action, named_group
from transop.transfer import (TransferSystem, closure, compatibility_oracle,
                              enumerate_all, hull, is_compatible, is_saturated,
                              j_local, join, meet, two_out_of_three, admits,
                              brute_force_hull, _context)


def sub_idx(lat, order, which=0):
    found = [i for i in range(lat.n) if lat.subgroup(i).order == order]
    return found[which]


def test_closure_examples():
    lat = named_group("cyclic(4)").lattice()
    triv = closure(lat, [])
    assert triv.edges() == []
    full = closure(lat, [(i, j) for i in range(lat.n) for j in range(lat.n)
                         if i != j and lat.leq[i][j]])
    assert full == TransferSystem.complete(lat)
    # seed e -> C4 forces e -> C2 by restriction
    t = closure(lat, [(0, lat.top)])
    assert t.relates(0, sub_idx(lat, 2))
    with pytest.raises(BadEdge):
        closure(lat, [(sub_idx(lat, 2), 0)])


def test_closure_sigma3_join_forces_transitivity():
    lat = named_group("symmetric(3)").lattice()
    c3 = sub_idx(lat, 3)
    t_b = closure(lat, [(0, c3)])
    t_e = closure(lat, [(c3, lat.top)])
    j = join(t_b, t_e)
    assert j.relates(0, lat.top)


def brute_force_enumeration(lat):
    """All conjugation-class subsets whose union passes the direct validator."""
    ctx = _context(lat)
    out = set()
    for r in range(len(ctx.pair_classes) + 1):
        for combo in itertools.combinations(ctx.pair_classes, r):
            bits = 0
            for cls in combo:
                bits |= cls
            if ctx.is_closed(bits):
                out.add(bits)
    return out


@pytest.mark.parametrize("spec,count", [
    ("cyclic(2)", 2), ("cyclic(3)", 2), ("cyclic(4)", 5),
    ("product(cyclic(2),cyclic(2))", 19), ("cyclic(6)", 10),
    ("symmetric(3)", 9), ("cyclic(8)", 14), ("quaternion8", 68),
    ("product(cyclic(4),cyclic(2))", 328), ("dihedral(4)", 294),
])
def test_enumerate_counts_and_brute_force(spec, count):
    lat = named_group(spec).lattice()
    systems = enumerate_all(lat)
    assert len(systems) == count
    assert len(set(systems)) == count
    for t in systems:
        t.validate()
    # brute force over closed class-subsets finds exactly the same systems
    assert {t.bits for t in systems} == brute_force_enumeration(lat)


def test_enumerate_is_sorted_and_bounded():
    lat = named_group("symmetric(3)").lattice()
    systems = enumerate_all(lat)
    keys = [t.key() for t in systems]
    assert keys == sorted(keys)
    with pytest.raises(BoundExceeded):
        enumerate_all(named_group("cyclic(30)").lattice())
    with pytest.raises(BoundExceeded):
        enumerate_all(lat, max_systems=3)


def test_lattice_ops():
    lat = named_group("symmetric(3)").lattice()
    systems = enumerate_all(lat)
    comp = TransferSystem.complete(lat)
    triv = TransferSystem.trivial(lat)
    for t in systems:
        assert meet(t, comp) == t
        assert join(t, comp) == comp
        assert meet(t, triv) == triv
        m, j = transfer.lattice_ops(t, t)
        assert m == t == j
        meet(t, comp).validate()
        join(t, triv).validate()
    other = named_group("cyclic(4)").lattice()
    with pytest.raises(LatticeMismatch):
        meet(systems[0], TransferSystem.trivial(other))


def test_compatible_trivial_and_complete():
    lat = named_group("symmetric(3)").lattice()
    systems = enumerate_all(lat)
    triv = TransferSystem.trivial(lat)
    comp = TransferSystem.complete(lat)
    for t in systems:
        assert is_compatible(triv, t)[0]
        assert is_compatible(t, comp)[0]


def test_c4_self_pair_witness():
    lat = named_group("cyclic(4)").lattice()
    c2 = sub_idx(lat, 2)
    t = closure(lat, [(0, c2), (0, lat.top)])
    ok, wit = is_compatible(t, t)
    assert not ok
    assert wit == (0, lat.top, c2)


def test_compatibility_monotone_decreasing_in_first_argument():
    for spec in ["cyclic(4)", "cyclic(6)", "symmetric(3)"]:
        lat = named_group(spec).lattice()
        systems = enumerate_all(lat)
        for t1, t2 in itertools.product(systems, repeat=2):
            if not is_compatible(t1, t2)[0]:
                continue
            assert t1.leq(t2)
            for s in systems:
                if s.leq(t1):
                    assert is_compatible(s, t2)[0]


def test_compatibility_not_monotone_in_second_argument():
    # enlarging the additive system enlarges the hypotheses of the condition
    # too, so compatibility can break: over S3, the C3-local system is
    # self-compatible but not compatible with its join with the e->C3 edge.
    lat = named_group("symmetric(3)").lattice()
    tm = j_local(lat, lat.subgroup(sub_idx(lat, 3)))
    bigger = join(tm, closure(lat, [(0, sub_idx(lat, 3))]))
    assert tm.leq(bigger)
    assert is_compatible(tm, tm)[0]
    ok, wit = is_compatible(tm, bigger)
    assert not ok
    assert wit == (sub_idx(lat, 3), lat.top, sub_idx(lat, 2))


def test_oracle_matches_transfer_level_definition():
    for spec in ["cyclic(4)", "cyclic(6)", "symmetric(3)"]:
        lat = named_group(spec).lattice()
        systems = enumerate_all(lat)
        for t1, t2 in itertools.product(systems, repeat=2):
            assert compatibility_oracle(t1, t2, bound=3) == is_compatible(t1, t2)[0]


def test_oracle_catches_c4_non_example_via_two_points():
    lat = named_group("cyclic(4)").lattice()
    t = closure(lat, [(0, sub_idx(lat, 2)), (0, lat.top)])
    # the failing coinduction needs two copies of the trivial orbit
    assert compatibility_oracle(t, t, bound=2) is False


def test_indexing_membership():
    lat = named_group("cyclic(4)").lattice()
    comp = TransferSystem.complete(lat)
    t = closure(lat, [(0, sub_idx(lat, 2)), (0, lat.top)])
    H = lat.subgroup(lat.top)
    triv3 = GSet.trivial(H, 3)
    assert admits(t, lat.top, triv3)
    c4_mod_c2 = GSet.from_coset_action(coset_action(H, lat.subgroup(sub_idx(lat, 2))))
    assert not admits(t, lat.top, c4_mod_c2)
    assert admits(comp, lat.top, c4_mod_c2)
    # the view wrapper exposes the same membership test plus the generators
    view = transfer.IndexingSystemView(t)
    assert view.contains(H, triv3)
    assert not view.contains(lat.top, c4_mod_c2)
    assert view.admissible_orbit_types(lat.top) == [0, lat.top]
    assert view.admissible_orbit_types(sub_idx(lat, 2)) == [0, sub_idx(lat, 2)]


def test_saturation_equivalences():
    for spec in ["cyclic(4)", "cyclic(6)", "product(cyclic(2),cyclic(2))",
                 "symmetric(3)", "quaternion8"]:
        lat = named_group(spec).lattice()
        for t in enumerate_all(lat):
            assert is_saturated(t) == two_out_of_three(t) == is_compatible(t, t)[0]
    s3 = enumerate_all(named_group("symmetric(3)").lattice())
    assert sum(is_saturated(t) for t in s3) == 6
    # the C4 non-example is not saturated
    lat = named_group("cyclic(4)").lattice()
    assert not is_saturated(closure(lat, [(0, sub_idx(lat, 2)), (0, lat.top)]))


def test_hull_examples_and_brute_force_agreement():
    for spec in ["cyclic(4)", "cyclic(6)", "product(cyclic(2),cyclic(2))",
                 "symmetric(3)", "quaternion8"]:
        lat = named_group(spec).lattice()
        systems = enumerate_all(lat)
        triv = TransferSystem.trivial(lat)
        comp = TransferSystem.complete(lat)
        assert hull(triv) == triv
        assert hull(comp) == comp
        for t in systems:
            h = hull(t)
            assert h == brute_force_hull(t, systems)
            assert is_compatible(h, t)[0]
            assert (h == t) == is_saturated(t)


def test_sigma3_hull_column_structure():
    lat = named_group("symmetric(3)").lattice()
    systems = enumerate_all(lat)
    unsat = [t for t in systems if not is_saturated(t)]
    assert len(unsat) == 3
    hulls = {hull(t) for t in unsat}
    assert len(hulls) == 1
    shared = hulls.pop()
    # the shared hull is the saturated system with the e->C2 class and e->C3
    c3 = sub_idx(lat, 3)
    want = closure(lat, [(0, sub_idx(lat, 2)), (0, c3)])
    assert shared == want


def test_j_local_systems():
    for spec in ["cyclic(4)", "symmetric(3)", "quaternion8"]:
        lat = named_group(spec).lattice()
        assert j_local(lat, lat.subgroup(0)) == TransferSystem.complete(lat)
        assert j_local(lat, lat.subgroup(lat.top)) == TransferSystem.trivial(lat)
        for i in range(lat.n):
            t = j_local(lat, lat.subgroup(i))
            t.validate()
            assert is_saturated(t)
    # S3, J = C3: the e -> C2 edges together with C3 -> S3
    lat = named_group("symmetric(3)").lattice()
    t = j_local(lat, lat.subgroup(sub_idx(lat, 3)))
    assert t == closure(lat, [(sub_idx(lat, 3), lat.top)])
    assert t.relates(0, sub_idx(lat, 2))
    assert not t.relates(0, sub_idx(lat, 3))
