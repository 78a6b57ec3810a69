from itertools import chain, combinations

import numpy as np
import pytest

from Toric_Agent.balancing import scaling_vector
from Toric_Agent.common.data_structures import DualCertificate, FarkasCertificate, IntegratorConfig
from Toric_Agent.common.errors import EnumerationGuardError, NotReversibleError
from Toric_Agent.dynamics import InvariantPolyhedron, detailed_rhs, simulate
from Toric_Agent.network_core import parse_network
from Toric_Agent.strata import (
    acyclic_orientations, descent_check, farkas_vector, orientation_from_edges, stratum_of,
    verify_certificate
)

CYCLE = "A <-> B ; kf=1, kr=1\nB <-> C ; kf=1, kr=1\nA <-> C ; kf=1, kr=1\n"


@pytest.fixture
def cycle():
    return parse_network(CYCLE)


def _faces(s):
    indices = range(s)
    return chain.from_iterable(combinations(indices, r) for r in range(1, s + 1))


class TestOrientations:
    @pytest.mark.parametrize("text,count", [
        ("A <-> B\n", 2),
        ("A <-> B\nC <-> D\n", 4),
        (CYCLE, 6),
    ])
    def test_counts(self, text, count):
        assert len(acyclic_orientations(parse_network(text).network)) == count

    def test_triangle_has_six(self, triangle):
        orientations = acyclic_orientations(triangle.network)
        assert len(orientations) == 6
        assert len({o.edges for o in orientations}) == 6

    def test_directed_cycle_rejected(self, cycle):
        assert orientation_from_edges(cycle.network, [(0, 1), (1, 2), (2, 0)]) is None

    def test_guard(self, triangle):
        with pytest.raises(EnumerationGuardError):
            acyclic_orientations(triangle.network, max_pairs=2)

    def test_requires_reversible(self, two_substrate):
        with pytest.raises(NotReversibleError):
            acyclic_orientations(two_substrate.network)


class TestStratumOf:
    def test_triangle_example(self, triangle):
        location = stratum_of(triangle.network, [1.0, 1.0], [2.0, 1.0])
        assert not location.on_stratum_boundary
        assert location.orientation.edges == ((0, 1), (0, 2), (1, 2))
        assert location.orientation.topological_order == (0, 1, 2)

    def test_birch_point_is_all_ties(self, triangle):
        L = np.array([0.5, 2.0])
        location = stratum_of(triangle.network, L, 1.0 / L)
        assert location.orientation is None
        assert len(location.tied_pairs) == 3

    def test_perturbed_point_has_orientation(self, triangle, rng):
        L = np.array([0.5, 2.0])
        for _ in range(20):
            c = (1.0 / L) * (1.0 + np.array([rng.uniform(-1e-3, 1e-3) for _ in range(2)]))
            assert stratum_of(triangle.network, L, c).orientation is not None


class TestFarkas:
    def test_cycle_forward_orientation_infeasible(self, cycle):
        orientation = orientation_from_edges(cycle.network, [(0, 1), (1, 2), (0, 2)])
        certificate = farkas_vector(cycle.network, orientation, (0,))
        assert isinstance(certificate, DualCertificate)
        assert certificate.combination[0] < 0
        assert verify_certificate(cycle.network, certificate)

    def test_cycle_reversed_orientation_feasible(self, cycle):
        orientation = orientation_from_edges(cycle.network, [(1, 0), (2, 1), (2, 0)])
        certificate = farkas_vector(cycle.network, orientation, (0,))
        assert isinstance(certificate, FarkasCertificate)
        assert certificate.alpha[0] >= 1
        assert certificate.alpha[1] == certificate.alpha[2] == 0
        assert all(slack >= 0 for slack in certificate.slacks)

    def test_face_untouched_by_edges(self):
        net = parse_network("species: A, B, C\nA <-> B\n").network
        orientation = orientation_from_edges(net, [(0, 1)])
        certificate = farkas_vector(net, orientation, (2,))
        assert isinstance(certificate, FarkasCertificate)
        assert certificate.alpha[:2] == (0, 0)
        assert certificate.alpha[2] >= 1

    def test_triangle_face(self, triangle):
        toward_face = orientation_from_edges(triangle.network, [(2, 1), (1, 0), (2, 0)])
        assert isinstance(farkas_vector(triangle.network, toward_face, (0,)), FarkasCertificate)
        away = orientation_from_edges(triangle.network, [(0, 1), (1, 2), (0, 2)])
        assert isinstance(farkas_vector(triangle.network, away, (0,)), DualCertificate)

    def test_every_certificate_verifies(self, cycle, triangle):
        for parsed in (cycle, triangle):
            net = parsed.network
            for orientation in acyclic_orientations(net):
                for face in _faces(net.s):
                    assert verify_certificate(net, farkas_vector(net, orientation, face))

    def test_projection_along_inward_normal(self, cycle):
        net = cycle.network
        polyhedron = InvariantPolyhedron.from_network(net, [1.0, 1.0, 1.0])
        assert polyhedron.dimension == 2
        for orientation in acyclic_orientations(net):
            for k in range(net.s):
                certificate = farkas_vector(net, orientation, (k,))
                if not isinstance(certificate, FarkasCertificate):
                    continue
                projected = polyhedron.project([float(a) for a in certificate.alpha])
                normal = polyhedron.inward_normal((k,))
                scale = float(projected @ normal)
                assert scale >= 0
                assert np.allclose(projected, scale * normal, atol=1e-9)

    def test_empty_face(self, cycle):
        orientation = acyclic_orientations(cycle.network)[0]
        with pytest.raises(ValueError):
            farkas_vector(cycle.network, orientation, ())


class TestDescent:
    def test_cycle_near_face(self, cycle):
        net, rates = cycle.network, cycle.rates
        c0 = [1e-3, 1.0, 1.5]
        L = scaling_vector(net, rates, c0)
        trajectory = simulate(net, rates, c0, config=IntegratorConfig(t_end=20.0),
                              c_star=L.birch_point)
        report = descent_check(net, L.values, trajectory, (0,), rates=rates)
        assert report.samples_checked > 0
        assert report.minimum >= -1e-10
        assert set(report.to_dict()) == {'descent_minimum', 'samples_checked', 'samples_skipped', 'flagged'}

    def test_zero_at_birch_point(self, cycle):
        L = np.array([2.0, 1.0, 0.5])
        assert np.allclose(detailed_rhs(cycle.network, L, 1.0 / L), 0.0, atol=1e-14)
