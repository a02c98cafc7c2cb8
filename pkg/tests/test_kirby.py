import random
from fractions import Fraction

import pytest

from _support import brute_force_kernel_dim, certified_examples, constraint_images, example, naive_evaluate
from kirbyrep.diagram import build_standard
from kirbyrep.families import dim2_conjugate, dim2_family, dim2_samples
from kirbyrep.kirby import (
    SizeCapExceeded,
    c_relation_residual,
    certify_invariance,
    check_descent,
    compat_kernel,
    fr_defect,
    is_irreducible,
    t_symmetry_residual,
)
from kirbyrep.rep import SMatrix
from kirbyrep.scalars import EXACT, FLOAT, GaussianRational
from kirbyrep.tensor import full_trace

EXAMPLES = certified_examples(exact=True)
IDS = [label for label, _ in EXAMPLES]


def test_trace_defects():
    for _, sm in EXAMPLES:
        assert fr_defect(0, 1, sm).scalar_value() == full_trace(sm.S) - 1
        assert fr_defect(0, -1, sm).scalar_value() == full_trace(sm.S_inv) - 1
    with pytest.raises(ValueError):
        fr_defect(-1, 1, EXAMPLES[0][1])
    with pytest.raises(ValueError):
        fr_defect(1, 0, EXAMPLES[0][1])


@pytest.mark.parametrize("label,sm", EXAMPLES, ids=IDS)
def test_defects_match_independent_evaluation(label, sm):
    for n in range(3):
        for sign in (1, -1):
            ref = naive_evaluate(build_standard("FR_SIDE", n, sign), sm) - \
                naive_evaluate(build_standard("FULL_TWIST", n, -sign), sm)
            got = fr_defect(n, sign, sm)
            assert got.equals(ref)
            assert t_symmetry_residual(got) == 0.0


@pytest.mark.parametrize("label,sm", EXAMPLES, ids=IDS)
def test_curl_relation(label, sm):
    for n in range(3):
        assert c_relation_residual(sm, n) == 0.0


def test_dim2_trace_defects_are_affine_in_k():
    for p in dim2_samples(25, seed=3):
        sm = SMatrix.unchecked(dim2_family(p), EXACT)
        assert fr_defect(0, 1, sm).scalar_value() == 2 * p.k - 1
        assert fr_defect(0, -1, sm).scalar_value() == 2 / GaussianRational(p.k) - 1
    for k in (2, Fraction(-3, 2), Fraction(5, 7)):
        sm = SMatrix.unchecked(dim2_conjugate(k), EXACT)
        assert fr_defect(0, 1, sm).scalar_value() == 2 * k - 1
        assert fr_defect(0, -1, sm).scalar_value() == GaussianRational(2) / k - 1


def test_trace_conditions_are_jointly_infeasible():
    # 2k = 1 forces k = 1/2, and then 2/k = 4 != 1
    k = Fraction(1, 2)
    assert 2 * k == 1 and 2 / k != 1


@pytest.mark.parametrize("label", ["flip v=2", "conjugated k=2", "rotated k=3"])
def test_descent(label):
    sm = example(label)
    for n in (0, 1):
        assert check_descent(sm, n) == 0.0
    with pytest.raises(SizeCapExceeded):
        check_descent(sm, 1, size_cap=50)


@pytest.mark.parametrize("label", ["flip v=2", "conjugated k=2", "signed flip v=3"])
@pytest.mark.parametrize("variant", ["plain", "symmetric"])
def test_compat_kernel_matches_brute_force(label, variant):
    sm = example(label)
    fsm = SMatrix.unchecked(sm.S.to_float(), FLOAT)
    for n in (0, 1, 2):
        levels = [n + 2] if variant == "plain" else [n + 2, n + 3]
        if sm.v ** (2 * levels[-1]) > (4096 if variant == "plain" else 256):
            break
        report = compat_kernel(sm, n, variant)
        expected = sum(brute_force_kernel_dim(sm, level, variant) for level in levels)
        assert report.kernel_dim == expected
        assert compat_kernel(fsm, n, variant).kernel_dim == expected
        for lv in report.levels:
            for w in lv.basis:
                assert all(m.is_zero() for m in constraint_images(w, sm, variant))


def test_compat_witness_space_is_linear():
    sm = example("conjugated k=2")
    report = compat_kernel(sm, 2)
    basis = report.levels[0].basis
    assert report.witness is basis[0]
    rng = random.Random(17)
    for _ in range(5):
        combo = basis[0].scale(0)
        for w in basis:
            combo = combo + w.scale(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
        assert all(m.is_zero() for m in constraint_images(combo, sm, "plain"))


def test_compat_frozen_dimensions_for_flip():
    # values computed by the brute-force oracle above
    dims = [compat_kernel(example("flip v=2"), n).kernel_dim for n in (0, 1, 2)]
    assert dims == [brute_force_kernel_dim(example("flip v=2"), n + 2, "plain") for n in (0, 1, 2)]
    assert dims == [12, 48, 60]


def test_compat_report_shape_and_cap():
    sm = example("flip v=2")
    report = compat_kernel(sm, 1, "symmetric")
    assert [lv.level for lv in report.levels] == [3, 4]
    assert report.weakly_constrained
    d = report.to_dict()
    assert d["kernel_dim"] == report.kernel_dim and d["variant"] == "symmetric"
    assert "kernel dimension" in report.format()
    with pytest.raises(SizeCapExceeded):
        compat_kernel(example("flip v=3"), 2, size_cap=1000)
    with pytest.raises(ValueError):
        compat_kernel(sm, -1)


def test_irreducibility():
    assert not is_irreducible(example("flip v=2"))
    assert not is_irreducible(example("conjugated k=2"))
    assert is_irreducible(example("trivial v=1"))


@pytest.mark.parametrize("strategy", ["zentral", "sym", "irreducible"])
def test_trivial_dimension_one_passes(strategy):
    cert = certify_invariance(example("trivial v=1"), strategy)
    assert cert.status == "pass"
    assert cert.headline().startswith("PASS")
    assert cert.convention_flip


@pytest.mark.parametrize("strategy", ["zentral", "symmetric", "irreducible"])
def test_flip_fails_at_trace(strategy):
    cert = certify_invariance(example("flip v=2"), strategy)
    assert cert.status == "fail"
    assert cert.headline() == "FAIL at tr(S)=1 (got 2)"


def test_conjugated_family_fails_irreducible_at_trace():
    for k in (2, 3, Fraction(1, 3)):
        sm = SMatrix.unchecked(dim2_conjugate(k), EXACT)
        cert = certify_invariance(sm, "irreducible")
        assert cert.status == "fail"
        assert cert.headline() == f"FAIL at tr(S)=1 (got {2 * k})"


def test_uncertified_input_is_recertified():
    sm = SMatrix.unchecked(dim2_family((2, 1, Fraction(1, 4))), EXACT)
    cert = certify_invariance(sm, "irreducible")
    assert cert.status == "fail"
    assert cert.first_failure.key == "smatrix"
    assert "sliding" in cert.first_failure.name


def test_size_cap_makes_certificate_inconclusive():
    cert = certify_invariance(example("trivial v=1"), "zentral", size_cap=0)
    assert cert.status == "inconclusive"
    assert cert.headline() == "INCONCLUSIVE"
    assert any("size cap" in n for n in cert.notes)


def test_unknown_strategy():
    with pytest.raises(ValueError):
        certify_invariance(example("flip v=2"), "modular")


def test_certificate_serialisation():
    cert = certify_invariance(example("conjugated k=2"), "zentral")
    d = cert.to_dict()
    assert d["status"] == "fail" and d["convention_flip"] is True
    assert d["checks"][0]["key"] == "A0"
    assert cert.format().splitlines()[0] == cert.headline()


def test_float_engine_certificate_agrees():
    sm = SMatrix.unchecked(dim2_conjugate(2, exact=False), FLOAT)
    cert = certify_invariance(sm, "irreducible")
    assert cert.status == "fail" and cert.first_failure.key == "A0"
