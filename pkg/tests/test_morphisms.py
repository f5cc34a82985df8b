"""Tests for automorphisms, automorphism subgroups and induced actions."""

import pytest
import numpy as np
import sys
import os

# Add the project root to the Python path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hypercenter_harness.constructions import (
    cyclic_group,
    dihedral_group,
    elementary_abelian_group,
    quaternion_group,
    symmetric_group,
)
from hypercenter_harness.errors import CapExceeded, NotAutomorphism, NotInvariant
from hypercenter_harness.group_core import center, generated_subgroup, trivial_subgroup, whole_group
from hypercenter_harness.morphisms import (
    AutSubgroup,
    Automorphism,
    a_invariant_closure,
    automorphism_group,
    count_automorphisms,
    fixed_points,
    induced_action,
    inner_automorphism_group,
    inner_automorphisms,
    invariant_normal_subgroups,
    is_invariant,
    is_normalized_by_inner,
    restrict_action_to_quotient,
)
from hypercenter_harness.theorems import build_example, example_z


class TestAutomorphism:
    """Test single automorphisms."""

    def test_from_image_accepts_inversion(self):
        """Inversion is an automorphism of an abelian group."""
        C5 = cyclic_group(5)
        alpha = Automorphism.from_image(C5, C5.inv)
        assert alpha(1) == 4
        assert alpha.compose(alpha).is_identity

    def test_from_image_rejects_non_bijection(self):
        """A non-injective map is refused."""
        C3 = cyclic_group(3)
        with pytest.raises(NotAutomorphism):
            Automorphism.from_image(C3, [0, 1, 1])

    def test_from_image_rejects_non_homomorphism(self):
        """A bijection that breaks multiplication is refused."""
        C4 = cyclic_group(4)
        with pytest.raises(NotAutomorphism):
            Automorphism.from_image(C4, [0, 2, 1, 3])

    def test_inverse(self):
        """alpha composed with its inverse is the identity."""
        C7 = cyclic_group(7)
        doubling = Automorphism.from_image(C7, (2 * np.arange(7)) % 7)
        assert doubling.compose(doubling.inverse()).is_identity


class TestAutomorphismGroup:
    """Test the automorphism search."""

    @pytest.mark.parametrize("group, expected", [
        (cyclic_group(1), 1),
        (cyclic_group(5), 4),
        (cyclic_group(8), 4),
        (symmetric_group(3), 6),
        (dihedral_group(8), 8),
        (quaternion_group(8), 24),
        (elementary_abelian_group(2, 3), 168),
    ])
    def test_orders(self, group, expected):
        """|Aut(G)| for small groups."""
        A = automorphism_group(group)
        assert A.order == expected
        assert count_automorphisms(group) == (expected, True)

    def test_members_sorted_identity_first(self):
        """Member 0 is the identity map."""
        A = automorphism_group(dihedral_group(8))
        assert np.array_equal(A.images[0], np.arange(8))

    def test_generators_close_to_whole_group(self):
        """The stored generators regenerate every member."""
        A = automorphism_group(quaternion_group(8))
        regenerated = AutSubgroup.generate(A.group, A.generator_images)
        assert regenerated.order == A.order
        assert regenerated.issubset(A)

    def test_count_limit(self):
        """Counting stops at the limit and says so."""
        assert count_automorphisms(quaternion_group(8), limit=5) == (5, False)

    def test_search_cap(self):
        """Groups above the automorphism cap are refused."""
        with pytest.raises(CapExceeded):
            automorphism_group(cyclic_group(300))


class TestInnerAutomorphisms:
    """Test Inn(G) and its relation to the center."""

    def test_inner_orders(self):
        """|Inn(G)| = |G| / |Z(G)|."""
        for G in (symmetric_group(3), dihedral_group(8), quaternion_group(8), cyclic_group(6)):
            assert inner_automorphism_group(G).order == G.order // center(G).order

    def test_bar_map_kernel_is_center(self):
        """The kernel of g -> conjugation by g is Z(G)."""
        D8 = dihedral_group(8)
        _, bar = inner_automorphisms(D8)
        assert bar.kernel() == center(D8)

    def test_fixed_points_of_inner_is_center(self):
        """C_G(Inn(G)) = Z(G)."""
        Q8 = quaternion_group(8)
        assert fixed_points(Q8, inner_automorphism_group(Q8)) == center(Q8)

    def test_aut_is_normalized_by_inner(self):
        """Aut(G) contains Inn(G) as a normal subgroup."""
        S3 = symmetric_group(3)
        assert is_normalized_by_inner(S3, automorphism_group(S3))
        assert inner_automorphism_group(S3).issubset(automorphism_group(S3))


class TestInvariance:
    """Test invariant subgroups and induced actions."""

    def test_klein_four_has_no_characteristic_proper_subgroups(self):
        """GL(2,2) moves every subgroup of order 2."""
        V = elementary_abelian_group(2, 2)
        A = automorphism_group(V)
        assert A.order == 6
        assert [N.order for N in invariant_normal_subgroups(V, A)] == [1, 4]

    def test_invariant_closure(self):
        """The Aut-closure of one involution in V4 is all of V4."""
        V = elementary_abelian_group(2, 2)
        A = automorphism_group(V)
        assert a_invariant_closure(V, A, [1]).is_whole

    def test_induced_action_on_abelian_quotient(self):
        """Inner automorphisms act trivially on D8 / Z(D8)."""
        D8 = dihedral_group(8)
        induced = induced_action(D8, center(D8), inner_automorphism_group(D8))
        assert induced.quotient.order == 4
        assert induced.action.order == 1

    def test_induced_action_requires_invariance(self):
        """Quotients by non-invariant subgroups are refused."""
        V = elementary_abelian_group(2, 2)
        A = automorphism_group(V)
        N = generated_subgroup(V, [1])
        assert not is_invariant(N, A)
        with pytest.raises(NotInvariant):
            induced_action(V, N, A)



class TestQuotientActions:
    """Test the action induced on a quotient."""

    def test_trivial_kernel_relabels_the_action(self):
        """G / {1} carries a copy of A."""
        S3 = symmetric_group(3)
        A = automorphism_group(S3)
        action = restrict_action_to_quotient(S3, trivial_subgroup(S3), A)
        assert action.group.order == 6
        assert action.order == A.order

    def test_whole_group_kernel_gives_trivial_action(self):
        """G / G is trivial, so is every induced map."""
        D8 = dihedral_group(8)
        action = restrict_action_to_quotient(D8, whole_group(D8), automorphism_group(D8))
        assert action.group.order == 1
        assert action.order == 1

    @pytest.mark.parametrize("p, expected", [(3, 2), (5, 4)])
    def test_example_acts_nontrivially_on_top(self, p, expected):
        """tau induces multiplication by 2 on G / Z, of order ord_p(2)."""
        G, A = build_example(p, 1)
        action = restrict_action_to_quotient(G, example_z(G, p), A)
        assert action.group.order == p
        assert action.order == expected
        assert fixed_points(action.group, action).is_trivial


class TestInvariantClosure:
    """Test a_invariant_closure."""

    def test_idempotent(self):
        """Closing a closure changes nothing."""
        D8 = dihedral_group(8)
        A = automorphism_group(D8)
        for x in range(D8.order):
            once = a_invariant_closure(D8, A, [x])
            assert a_invariant_closure(D8, A, once.elems) == once

    def test_monotone(self):
        """Larger seed sets give larger closures."""
        G, A = build_example(3, 1)
        for x in range(G.order):
            for y in range(G.order):
                assert a_invariant_closure(G, A, [x]).issubset(a_invariant_closure(G, A, [x, y]))

    def test_example_generators(self):
        """In Ex(p, 1), {a_0} closes to G and {a_1} spans only Z."""
        for p in (3, 5):
            G, A = build_example(p, 1)
            assert a_invariant_closure(G, A, [1]).is_whole
            top = a_invariant_closure(G, A, [p])
            assert top.order == p
            assert top == example_z(G, p)


if __name__ == "__main__":
    pytest.main([__file__])
