"""Tests for upper central series, A-center series and chain predicates."""

import pytest
import sys
import os

# Add the project root to the Python path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from hypercenter_harness.constructions import (
    cyclic_group,
    dihedral_group,
    quaternion_group,
    symmetric_group,
)
from hypercenter_harness.errors import NotAChain, NotInvariant
from hypercenter_harness.group_core import (
    center,
    direct_product,
    generated_subgroup,
    normal_subgroups,
    whole_group,
)
from hypercenter_harness.morphisms import (
    AutSubgroup,
    automorphism_group,
    fixed_points,
    induced_action,
    inner_automorphism_group,
    restrict_action_to_quotient,
)
from hypercenter_harness.series import (
    a_center_series,
    check_chain,
    hypercenter,
    hypercentral_type,
    nilpotency_class,
    stabilizes_series,
    upper_central_series,
)
from hypercenter_harness.theorems import build_example


class TestUpperCentralSeries:
    """Test the upper central series."""

    def test_dihedral_8(self):
        """D8 has class 2 with Z_1 of order 2."""
        series = upper_central_series(dihedral_group(8))
        assert series.orders() == [1, 2, 8]
        assert series.length == 2
        assert series.is_hypercentral
        assert series.stabilized

    def test_dihedral_16(self):
        """D16 has class 3."""
        series = upper_central_series(dihedral_group(16))
        assert series.orders() == [1, 2, 4, 16]
        assert nilpotency_class(dihedral_group(16)) == 3

    def test_nilpotency_classes(self):
        """Classes of small groups; S3 is not nilpotent."""
        assert nilpotency_class(quaternion_group(8)) == 2
        assert nilpotency_class(cyclic_group(6)) == 1
        assert nilpotency_class(cyclic_group(1)) == 0
        assert nilpotency_class(symmetric_group(3)) is None

    def test_s3_hypercenter_trivial(self):
        """S3 has trivial center, so its series stops at once."""
        S3 = symmetric_group(3)
        series = upper_central_series(S3)
        assert series.orders() == [1]
        assert hypercenter(S3).is_trivial
        assert not series.is_hypercentral

    def test_first_term_is_center(self):
        """Z_1 is the center."""
        G = dihedral_group(12)
        assert upper_central_series(G).term(1) == center(G)

    def test_terms_past_the_end(self):
        """A stabilized series repeats its top term."""
        series = upper_central_series(dihedral_group(8))
        assert series.term(10) == series.top
        with pytest.raises(IndexError):
            series.term(-1)


class TestACenterSeries:
    """Test A-center series for actions other than Inn(G)."""

    def test_trivial_action(self):
        """Under the trivial action every group is A-central."""
        C4 = cyclic_group(4)
        series = a_center_series(C4, AutSubgroup.trivial(C4))
        assert series.orders() == [1, 4]

    def test_inversion_on_c4(self):
        """Aut(C4) = <inversion> makes C4 hypercentral in two steps."""
        C4 = cyclic_group(4)
        assert a_center_series(C4, automorphism_group(C4)).orders() == [1, 2, 4]
        assert hypercentral_type(C4, automorphism_group(C4)) == 2

    def test_inversion_on_c3(self):
        """Inversion fixes nothing non-trivial in C3."""
        C3 = cyclic_group(3)
        assert hypercentral_type(C3, automorphism_group(C3)) is None
        assert hypercenter(C3, automorphism_group(C3)).is_trivial

    def test_truncated_series(self):
        """max_steps truncation leaves the series unstabilized."""
        series = a_center_series(dihedral_group(16), inner_automorphism_group(dihedral_group(16)),
                                 max_steps=1)
        assert series.orders() == [1, 2]
        assert not series.stabilized
        with pytest.raises(IndexError):
            series.term(3)

    def test_action_on_wrong_group(self):
        """The acting group must act on the given group."""
        with pytest.raises(ValueError):
            a_center_series(cyclic_group(4), inner_automorphism_group(cyclic_group(4)))


class TestChains:
    """Test chain validation and stabilization."""

    def test_upper_central_series_is_stabilized_by_inner(self):
        """Inn(G) acts trivially on each upper central factor."""
        Q8 = quaternion_group(8)
        series = upper_central_series(Q8)
        assert stabilizes_series(inner_automorphism_group(Q8), list(series.terms))

    def test_s3_chain_not_stabilized(self):
        """Conjugation by a transposition inverts A3."""
        S3 = symmetric_group(3)
        chain = normal_subgroups(S3)
        assert not stabilizes_series(inner_automorphism_group(S3), chain)

    def test_non_ascending_chain(self):
        """A chain must be ascending."""
        D8 = dihedral_group(8)
        inner = inner_automorphism_group(D8)
        with pytest.raises(NotAChain):
            check_chain(inner, [whole_group(D8), center(D8)])

    def test_non_normal_term(self):
        """Every term must be normal."""
        S3 = symmetric_group(3)
        involution = int((S3.element_orders == 2).nonzero()[0][0])
        with pytest.raises(NotAChain):
            check_chain(inner_automorphism_group(S3), [generated_subgroup(S3, [involution])])

    def test_non_invariant_term(self):
        """Every term must be invariant under the action."""
        C2 = cyclic_group(2)
        V = direct_product(C2, C2)
        A = automorphism_group(V)
        with pytest.raises(NotInvariant):
            check_chain(A, [generated_subgroup(V, [1])])



class TestSeriesInvariants:
    """Test properties that tie the series to fixed points and to the acting group."""

    @staticmethod
    def _cases():
        D8, D16 = dihedral_group(8), dihedral_group(16)
        Ex, A = build_example(3, 1)
        return [(D8, inner_automorphism_group(D8)), (D16, automorphism_group(D16)), (Ex, A)]

    def test_each_layer_is_fixed_points_of_the_quotient_action(self):
        """Z_{i+1} / Z_i is the fixed-point subgroup of A on G / Z_i."""
        for G, A in self._cases():
            series = a_center_series(G, A)
            for i, term in enumerate(series.terms):
                induced = induced_action(G, term, A)
                action = restrict_action_to_quotient(G, term, A)
                assert action.order == induced.action.order
                layer = induced.projection.preimage(fixed_points(action.group, action))
                assert layer == series.term(i + 1)

    def test_larger_action_gives_smaller_terms(self):
        """trivial <= Inn(G) <= Aut(G) gives Z_i(G, Aut) <= Z_i(G, Inn) <= Z_i(G, 1)."""
        for G in (dihedral_group(8), dihedral_group(16), quaternion_group(8)):
            actions = [AutSubgroup.trivial(G), inner_automorphism_group(G), automorphism_group(G)]
            assert actions[1].issubset(actions[2])
            chains = [a_center_series(G, A) for A in actions]
            steps = max(s.length for s in chains) + 1
            for i in range(steps + 1):
                assert chains[2].term(i).issubset(chains[1].term(i))
                assert chains[1].term(i).issubset(chains[0].term(i))

    def test_hypercenter_of_s3_times_c2(self):
        """Z_inf(S3 x C2) is the C2 factor, of index 6."""
        G = direct_product(symmetric_group(3), cyclic_group(2))
        top = hypercenter(G)
        assert top.order == 2
        assert top.index == 6
        assert upper_central_series(G).orders() == [1, 2]


if __name__ == "__main__":
    pytest.main([__file__])
