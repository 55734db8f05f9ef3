from __future__ import annotations

import pytest

from shilnikov_switching.errors import InvalidNeighbourhoods
from shilnikov_switching.geometry import WallPoint
from shilnikov_switching.maps import TransitionSpec
from shilnikov_switching.orbits import iterate, suspend_orbit
from shilnikov_switching.paths import ItineraryPath, all_paths
from shilnikov_switching.switching import realize_path
from shilnikov_switching.follows import verify_follows


def horizon_for(w, k, tau=1.0):
    return sum(s.flight_time for s in iterate(w, k).steps) + k * tau + 0.5


@pytest.fixture(scope="module")
def witness():
    r = realize_path("121")
    return r.witness, suspend_orbit(r.witness, horizon_for(r.witness, 3))


class TestFollows:
    def test_own_path(self, witness):
        _, traj = witness
        rep = verify_follows(traj, ItineraryPath.parse("121"))
        assert rep.follows and rep.first_violation is None
        assert len(rep.t) == 4 and len(rep.z) == 3
        assert all(a < z < b for a, z, b in zip(rep.t, rep.z, rep.t[1:]))

    def test_accepts_string_path(self, witness):
        _, traj = witness
        assert verify_follows(traj, "121").follows

    def test_prefixes_are_followed(self, witness):
        _, traj = witness
        for k in range(4):
            assert verify_follows(traj, ItineraryPath.parse("121"[:k])).follows

    @pytest.mark.parametrize("other", ["221", "111", "122"])
    def test_one_symbol_change(self, witness, other):
        _, traj = witness
        rep = verify_follows(traj, ItineraryPath.parse(other))
        assert not rep.follows
        first_diff = next(i for i, (a, b) in enumerate(zip("121", other), 1) if a != b)
        assert rep.first_violation == first_diff

    def test_too_long(self, witness):
        _, traj = witness
        rep = verify_follows(traj, ItineraryPath.parse("1211"))
        assert not rep.follows

    def test_window_radius_too_small(self, witness):
        _, traj = witness
        rep = verify_follows(traj, ItineraryPath.parse("121"), tube_radius=1e-30, network_radius=1.0)
        assert not rep.follows and "window" in rep.violations[0][1]

    @pytest.mark.parametrize("tube, net", [(0.0, 1.0), (0.6, 1.0), (0.3, 0.2)])
    def test_invalid_neighbourhoods(self, witness, tube, net):
        _, traj = witness
        with pytest.raises(InvalidNeighbourhoods):
            verify_follows(traj, ItineraryPath.parse("1"), tube_radius=tube, network_radius=net)

    def test_all_order_three_paths(self):
        for p in all_paths(3):
            r = realize_path(p)
            traj = suspend_orbit(r.witness, horizon_for(r.witness, 3))
            assert verify_follows(traj, p).follows
            assert not verify_follows(traj, p.swapped()).follows

    def test_longer_tau(self):
        ts = TransitionSpec(tau=3.0)
        r = realize_path("12")
        traj = suspend_orbit(r.witness, horizon_for(r.witness, 2, 3.0), tspec=ts)
        rep = verify_follows(traj, ItineraryPath.parse("12"), tube_radius=1.0, network_radius=1.0)
        assert rep.follows
