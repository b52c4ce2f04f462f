"""Acceptance suite: every criterion at its stated size, exact tolerances.

Each test prints one PASS/FAIL line; run with -s to see them.
"""

from kleinlat import verification as V


def _report(name, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_01_round_trip_equivalence():
    _report("criterion 1 round-trip", *V.check_round_trip(max_m=3, random_count=200, seed=0))


def test_02_dimension_formulas():
    _report("criterion 2 dimensions", *V.check_dimensions(max_m=3))


def test_03_cohomology_xi():
    _report("criterion 3 cohomology/xi", *V.check_cohomology(max_m=3, degrees=(1, 2, 3, 4)))


def test_04_dual_cohomology_eta():
    _report("criterion 4 dual/eta", *V.check_dual_cohomology(max_m=3, degrees=(1, 2, 3, 4)))


def test_05_torsion_bounds():
    _report("criterion 5 torsion", *V.check_torsion_bounds(seed=0))


def test_06_syzygy_laws():
    _report("criterion 6 syzygy", *V.check_syzygy(max_m=3))


def test_07_endomorphism_rings():
    _report("criterion 7 end rings", *V.check_end_rings(max_hom_m=2, max_special_m=3))


def test_08_cross_tube_homomorphisms():
    _report("criterion 8 cross-tube", *V.check_cross_tube(pair_count=20, seed=0))


def test_09_orbits_canonical_forms():
    _report("criterion 9 orbits", *V.check_orbits(aut_count=500, seed=0))


def test_10_symmetric_group_action():
    _report("criterion 10 S3 action", *V.check_s3(max_m=3))


def test_11_group_constructions():
    _report("criterion 11 groups", *V.check_groups(pair_count=1000, seed=0))
