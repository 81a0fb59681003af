"""Full verification ladder, one test per criterion.

Each test drives one registered criterion of the desk-scale suite and fails
with the offending check lines if any check inside it misses its tolerance.
Run with -s to see the per-check lines for passing criteria too.
"""

from jackdunkl.acceptance import CRITERIA, run_suite


def _drive(key, seed=0):
    ((name, rows),) = run_suite([key], seed=seed)
    print()
    for row in rows:
        print(row.line())
    failed = [row.line() for row in rows if not row.passed]
    verdict = "FAIL" if failed else "PASS"
    print(f"{verdict} criterion {name}: {len(rows) - len(failed)}/{len(rows)} checks")
    assert not failed, f"criterion {name}:\n" + "\n".join(failed)


def test_registry_covers_every_criterion_once():
    keys = [key for key, _desc, _fn, _seeded in CRITERIA]
    assert keys == [
        "section-identity",
        "structural",
        "gram-schmidt",
        "master",
        "beta-integrals",
        "series-laplace",
        "lattice",
        "post-widder",
        "series-tails",
    ]
    assert len(set(keys)) == len(keys)


def test_exact_section_identity_suite():
    _drive("section-identity")


def test_structural_identity_suite():
    _drive("structural")


def test_orthogonalization_matches_direct_construction():
    _drive("gram-schmidt")


def test_master_transform_quadrature():
    _drive("master")


def test_beta_integral_identities():
    _drive("beta-integrals")


def test_series_transform_identities():
    _drive("series-laplace")


def test_lattice_sum_identity():
    _drive("lattice")


def test_sequence_inversion_recovers_density():
    _drive("post-widder")


def test_series_truncation_certificates():
    _drive("series-tails")
