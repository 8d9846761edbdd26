"""
Bistatic path geometry tests
"""

import numpy as np
import pytest

from wisense_lab import SPEED_OF_LIGHT
from wisense_lab.channel.geometry import arrival_angle, los_delay, path_geometry
from wisense_lab.errors import DegenerateGeometryError, SensingLabError

TX = (0.0, 0.0)
RX = (4.0, 0.0)


class TestPathGeometry:

    def test_off_axis_scatterer(self):
        """(2, 3) gives 2 * sqrt(13) m and about 24.05 ns"""
        geometry = path_geometry(TX, RX, (2.0, 3.0))
        assert geometry.path_length == pytest.approx(2 * np.sqrt(13))
        assert geometry.path_length == pytest.approx(7.2111, abs=1e-4)
        assert geometry.delay == pytest.approx(24.05e-9, abs=0.01e-9)

    def test_scatterer_on_segment_matches_los(self):
        geometry = path_geometry(TX, RX, (2.0, 0.0))
        assert geometry.path_length == pytest.approx(4.0)

    def test_los_delay(self):
        assert los_delay(TX, RX) == pytest.approx(13.34e-9, abs=0.01e-9)
        assert los_delay(TX, RX) == pytest.approx(4.0 / SPEED_OF_LIGHT)

    def test_vectorised_over_trajectory(self):
        positions = np.array([[2.0, 3.0], [2.0, 0.0], [1.0, 1.0]])
        geometry = path_geometry(TX, RX, positions)
        assert geometry.path_length.shape == (3,)
        for i, pos in enumerate(positions):
            single = path_geometry(TX, RX, pos)
            assert geometry.path_length[i] == pytest.approx(single.path_length)
            assert geometry.aoa[i] == pytest.approx(single.aoa)

    def test_coincident_with_receiver(self):
        with pytest.raises(DegenerateGeometryError):
            path_geometry(TX, RX, RX)

    def test_non_finite_position(self):
        with pytest.raises(SensingLabError):
            path_geometry(TX, RX, (np.nan, 1.0))


class TestArrivalAngle:

    def test_los_is_broadside(self):
        """Broadside points from the receiver toward the transmitter"""
        assert arrival_angle(TX, RX, TX) == pytest.approx(0.0)

    def test_perpendicular_directions(self):
        # broadside is -x; clockwise from it is +y
        assert arrival_angle(TX, RX, (4.0, 2.0)) == pytest.approx(np.pi / 2)
        assert arrival_angle(TX, RX, (4.0, -2.0)) == pytest.approx(-np.pi / 2)

    def test_forty_five_degrees(self):
        assert arrival_angle(TX, RX, (2.0, 2.0)) == pytest.approx(np.pi / 4)

    def test_coincident_link_rejected(self):
        with pytest.raises(DegenerateGeometryError):
            arrival_angle(TX, TX, (1.0, 1.0))
