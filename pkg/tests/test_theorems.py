"""Tests for the finite-instance checks."""

import pytest
import sys
import os
from unittest.mock import patch

# Add the project root to the Python path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hypercenter_harness.constructions import (
    cyclic_group,
    dihedral_group,
    elementary_abelian_group,
    quaternion_group,
    symmetric_group,
)
from hypercenter_harness.catalog import shared_catalog
from hypercenter_harness import theorems
from hypercenter_harness.errors import NotOddPrime
from hypercenter_harness.group_core import (
    center,
    direct_product,
    generated_subgroup,
    normal_subgroups,
    subgroup_table,
    trivial_subgroup,
    whole_group,
)
from hypercenter_harness.morphisms import AutSubgroup, automorphism_group, inner_automorphism_group
from hypercenter_harness.theorems import (
    CheckReport,
    Verdict,
    build_example,
    coprime_decomposition,
    example_z,
    quotient_is_nilpotent,
    search_kos_witness,
    sort_reports,
    verify_claim_star,
    verify_corollary2,
    verify_corollary3,
    verify_corollary4,
    verify_example,
    verify_lemma1,
    verify_theorem1,
    verify_theorem2_B,
    verify_theorem2_H,
)


def _alternating(S3):
    return normal_subgroups(S3)[1]


def _s3_times_c2():
    return direct_product(symmetric_group(3), cyclic_group(2))


class TestCheckReport:
    """Test report bookkeeping."""

    def test_inconsistent_verdict_rejected(self):
        """premises_ok must agree with the verdict."""
        with pytest.raises(ValueError):
            CheckReport("x", "G", True, Verdict.PREMISES_UNMET)
        with pytest.raises(ValueError):
            CheckReport("x", "G", False, Verdict.HOLDS)

    def test_sorting(self):
        """Reports sort by check name, then group name."""
        reports = [
            CheckReport.decide("kos", "S3", True, {}),
            CheckReport.decide("kos", "D8", True, {}),
            CheckReport.decide("corollary2", "S3", True, {}),
        ]
        ordered = [(r.check_name, r.group_name) for r in sort_reports(reports)]
        assert ordered == [("corollary2", "S3"), ("kos", "D8"), ("kos", "S3")]

    def test_to_dict(self):
        """Unmet reports carry their reason."""
        doc = CheckReport.unmet("theorem1", "S3", "L is not normal in G").to_dict()
        assert doc["verdict"] == "premises_unmet"
        assert doc["witness"] == {"reason": "L is not normal in G"}


class TestTheorem1:
    """Test the index bound [G : Z_inf(G)] <= |Aut(L)| |Z(L)|."""

    def test_automorphism_count_memo_is_bounded(self):
        """The Aut(L) count memo evicts its oldest entries."""
        theorems._aut_counts.clear()
        with patch.object(theorems, "AUT_COUNT_MEMO_SIZE", 2):
            for n in (3, 4, 5):
                theorems.cached_automorphism_count(cyclic_group(n), 64)
            assert len(theorems._aut_counts) == 2
            assert theorems.cached_automorphism_count(cyclic_group(5), 64) == (4, True)
        theorems._aut_counts.clear()

    def test_s3_over_a3_is_sharp(self):
        """For S3 and L = A3 both sides equal 6."""
        S3 = symmetric_group(3)
        report = verify_theorem1(S3, _alternating(S3))
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["lhs_index"] == 6
        assert report.quantities["rhs_bound"] == 6
        assert report.quantities["equality"] == 1

    def test_whole_group(self):
        """L = G always satisfies the premise."""
        S4 = symmetric_group(4)
        report = verify_theorem1(S4, whole_group(S4))
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["aut_l_order"] == 24

    def test_non_normal_l(self):
        """A non-normal L leaves the premises unmet."""
        S3 = symmetric_group(3)
        involution = int((S3.element_orders == 2).nonzero()[0][0])
        report = verify_theorem1(S3, generated_subgroup(S3, [involution]))
        assert report.verdict == Verdict.PREMISES_UNMET
        assert not report.premises_ok

    def test_quotient_not_nilpotent(self):
        """L = 1 in S3 fails the hypercentral-quotient premise."""
        S3 = symmetric_group(3)
        report = verify_theorem1(S3, trivial_subgroup(S3))
        assert report.verdict == Verdict.PREMISES_UNMET


class TestLemmaAndCoprime:
    """Test the lemma and the coprime decomposition."""

    def test_lemma_on_s3(self):
        """A = Z(A3) = A3, H = C_S3(A3) = A3."""
        S3 = symmetric_group(3)
        A3 = _alternating(S3)
        report = verify_lemma1(S3, A3, A3)
        assert report.verdict == Verdict.HOLDS

    def test_lemma_on_nilpotent_group(self):
        """In D8 with A = Z(D8) and H = D8 the lemma holds."""
        D8 = dihedral_group(8)
        report = verify_lemma1(D8, center(D8), center(D8))
        assert report.verdict == Verdict.HOLDS

    def test_coprime_decomposition_c5(self):
        """Aut(C5) has order coprime to 5 and moves everything."""
        C5 = cyclic_group(5)
        report = coprime_decomposition(C5, automorphism_group(C5))
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["commutator_order"] == 5
        assert report.quantities["centralizer_order"] == 1

    def test_coprime_inverting_one_coordinate(self):
        """(Z/3)^2 with the first coordinate inverted splits into two factors of order 3."""
        entry = shared_catalog().get("E3^2:inv1")
        Q = entry.action()
        report = coprime_decomposition(Q.group, Q)
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["q_order"] == 2
        assert report.quantities["commutator_order"] == 3
        assert report.quantities["centralizer_order"] == 3

    def test_coprime_premise(self):
        """gcd(|C4|, |Aut(C4)|) = 2 leaves the premises unmet."""
        C4 = cyclic_group(4)
        report = coprime_decomposition(C4, automorphism_group(C4))
        assert report.verdict == Verdict.PREMISES_UNMET


class TestCorollaries:
    """Test the corollaries on small groups."""

    def test_corollary2_d8(self):
        """D8 with L = 1 and m = 2."""
        D8 = dihedral_group(8)
        report = verify_corollary2(D8, trivial_subgroup(D8), 2)
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["quotient_class"] == 2
        assert report.quantities["series_length"] == 2

    def test_corollary2_class_too_large(self):
        """m below the class of G/L leaves the premises unmet."""
        D8 = dihedral_group(8)
        report = verify_corollary2(D8, trivial_subgroup(D8), 1)
        assert report.verdict == Verdict.PREMISES_UNMET

    def test_corollary2_s3_times_c2(self):
        """S3 x C2 with L a non-abelian normal subgroup of order 6 and m = 1."""
        G = _s3_times_c2()
        L = next(N for N in normal_subgroups(G)
                 if N.order == 6 and not subgroup_table(N)[0].is_abelian)
        report = verify_corollary2(G, L, 1)
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["d"] == 6
        assert report.quantities["z_dm_order"] == 2

    def test_corollary2_s3_over_a3(self):
        """S3 with L = A3 and m = 1."""
        S3 = symmetric_group(3)
        report = verify_corollary2(S3, _alternating(S3), 1)
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["quotient_class"] == 1
        assert report.quantities["hypercenter_order"] == 1

    def test_kos_s3_times_c2(self):
        """S3 x C2 has t = 6 and a witness of order 3."""
        report = search_kos_witness(_s3_times_c2())
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["t"] == 6
        assert report.quantities["witness_order"] == 3

    def test_kos_s3(self):
        """S3 has t = 6 and minimal witness A3."""
        report = search_kos_witness(symmetric_group(3))
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["t"] == 6
        assert report.quantities["witness_order"] == 3

    def test_corollary3_single_step(self):
        """G >= G >= 1 for C4 compares against f(4)."""
        C4 = cyclic_group(4)
        report = verify_corollary3(C4, [(whole_group(C4), trivial_subgroup(C4))])
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["t"] == 4
        assert report.quantities["f_evaluated_at"] == 4

    def test_corollary3_caps_argument(self):
        """t above the cap is compared against f at the cap."""
        D8 = dihedral_group(8)
        report = verify_corollary3(D8, [(whole_group(D8), trivial_subgroup(D8))])
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["f_evaluated_at"] == 7

    def test_corollary3_trivial_factor(self):
        """F_1 = G_1 = 1 on a nilpotent group leaves the premises unmet."""
        D8 = dihedral_group(8)
        report = verify_corollary3(D8, [(trivial_subgroup(D8), trivial_subgroup(D8))])
        assert report.verdict == Verdict.PREMISES_UNMET

    def test_corollary3_empty_chain(self):
        """An empty chain leaves the premises unmet."""
        report = verify_corollary3(cyclic_group(4), [])
        assert report.verdict == Verdict.PREMISES_UNMET

    def test_corollary4_s3(self):
        """For S3 under Inn, G0 is trivial and L is A3."""
        S3 = symmetric_group(3)
        report = verify_corollary4(S3, inner_automorphism_group(S3), normal_subgroups(S3))
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["g0_order"] == 1
        assert report.quantities["l_order"] == 3

    def test_corollary4_unmarked_factor(self):
        """An unmarked factor with a nontrivial action leaves the premises unmet."""
        S3 = symmetric_group(3)
        report = verify_corollary4(S3, inner_automorphism_group(S3), normal_subgroups(S3), marked={1})
        assert report.verdict == Verdict.PREMISES_UNMET


class TestActions:
    """Test claim (*) and the two parts of Theorem 2."""

    @pytest.mark.parametrize("group", [quaternion_group(8), dihedral_group(8), symmetric_group(3)])
    def test_claim_star_inner(self, group):
        """G_d Gbar_d lies in Z_d(S) under Inn(G)."""
        report = verify_claim_star(group, inner_automorphism_group(group))
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["failures"] == 0

    def test_claim_star_aut(self):
        """Claim (*) for D8 under Aut(D8)."""
        D8 = dihedral_group(8)
        report = verify_claim_star(D8, automorphism_group(D8))
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["s_order"] == 64

    def test_claim_star_requires_inner(self):
        """A must contain Inn(G)."""
        S3 = symmetric_group(3)
        report = verify_claim_star(S3, AutSubgroup.trivial(S3))
        assert report.verdict == Verdict.PREMISES_UNMET

    def test_theorem2_h_s3(self):
        """S3 under Inn with L = A3."""
        S3 = symmetric_group(3)
        report = verify_theorem2_H(S3, inner_automorphism_group(S3), _alternating(S3))
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["d"] == 3
        assert report.quantities["ga_in_n"] == 1

    @pytest.mark.parametrize("group", [symmetric_group(3), dihedral_group(8), _s3_times_c2()])
    def test_theorem2_h_under_inner_matches_theorem1(self, group):
        """With A = Inn(G) the A-hypercenter index is the index in Theorem 1."""
        inner = inner_automorphism_group(group)
        for L in normal_subgroups(group):
            if not quotient_is_nilpotent(group, L):
                continue
            second = verify_theorem2_H(group, inner, L)
            first = verify_theorem1(group, L)
            assert second.verdict == Verdict.HOLDS
            assert second.quantities["index"] == first.quantities["lhs_index"]

    def test_theorem2_h_inversion(self):
        """Inversion on (Z/3)^2 fixes nothing, so with L = G the index is 9."""
        X = elementary_abelian_group(3, 2)
        A = AutSubgroup.generate(X, [X.inv], name="inv")
        report = verify_theorem2_H(X, A, whole_group(X))
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["index"] == 9
        assert report.quantities["d"] == 9

    def test_theorem2_h_example_with_l_z(self):
        """G/Z is not A-hypercentral in the example family."""
        G, A = build_example(3, 1)
        report = verify_theorem2_H(G, A, example_z(G, 3))
        assert report.verdict == Verdict.PREMISES_UNMET
        assert "hypercentral" in report.witness["reason"]

    def test_theorem2_b_nilpotent(self):
        """A nilpotent group is its own witness quotient with L = 1."""
        D8 = dihedral_group(8)
        report = verify_theorem2_B(D8, inner_automorphism_group(D8))
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["witness_order"] == 1
        assert report.quantities["t"] == 1

    def test_theorem2_b_example(self):
        """The example family needs L = G."""
        G, A = build_example(3, 1)
        report = verify_theorem2_B(G, A)
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["witness_order"] == 9


class TestExample:
    """Test the truncated counterexample family."""

    @pytest.mark.parametrize("p, n", [(3, 1), (3, 2), (5, 1)])
    def test_example_holds(self, p, n):
        """All three properties hold at small truncations."""
        report = verify_example(p, n)
        assert report.verdict == Verdict.HOLDS
        assert report.quantities["g_order"] == p ** (n + 1)
        assert report.quantities["z_index"] == p

    def test_example_z(self):
        """Z has index p and is fixed pointwise by A."""
        G, A = build_example(3, 2)
        Z = example_z(G, 3)
        assert Z.order == 9
        assert (A.images[:, Z.array] == Z.array).all()

    def test_tau_has_order_four_for_p_five(self):
        """tau doubles a_0, and 2 has order 4 mod 5."""
        G, A = build_example(5, 1)
        tau = A.generator_images[0]
        current, k = tau.copy(), 1
        while not (current == G.elements).all():
            current, k = tau[current], k + 1
        assert k == 4
        assert verify_example(5, 1).quantities["top_action_order"] == 4

    @pytest.mark.parametrize("p", [2, 4, 9])
    def test_rejects_non_odd_primes(self, p):
        """Only odd primes are accepted."""
        with pytest.raises(NotOddPrime):
            build_example(p, 1)


if __name__ == "__main__":
    pytest.main([__file__])
