"""Check that a suspended trajectory follows a finite path of connections.

Neighbourhood model: ``V_O`` is the block itself. The window ``V_i`` is the
ball of radius ``tube_radius`` around the point ``p_i`` of connection ``i``
reached half-way through the tube, so it sits ``tau / 2`` time units away
from the block on either side. The network neighbourhood ``N`` is the block
together with all points of the tubes within ``network_radius`` of a
connection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidNeighbourhoods
from .orbits import Section, Suspension
from .paths import ItineraryPath


@dataclass
class FollowReport:
    follows: bool
    t: list = field(default_factory=list)
    z: list = field(default_factory=list)
    violations: list = field(default_factory=list)  # (j, reason)

    @property
    def first_violation(self) -> int | None:
        return self.violations[0][0] if self.violations else None


def verify_follows(
    trajectory: Suspension,
    path: ItineraryPath | str,
    tube_radius: float = 0.1,
    network_radius: float = 1.0,
) -> FollowReport:
    """Extract entry times ``t_j`` and window visits ``z_j`` and test the definition.

    Violations are indexed by the 1-based position ``j`` in ``path``; index
    ``k + 1`` refers to the final entry.
    """
    if not isinstance(path, ItineraryPath):
        path = ItineraryPath.parse(str(path))
    tau = trajectory.tau
    if not (0 < tube_radius <= network_radius):
        raise InvalidNeighbourhoods("need 0 < tube_radius <= network_radius")
    if not tube_radius < tau / 2:
        raise InvalidNeighbourhoods(f"tube windows of radius {tube_radius} would meet the block (tau/2 = {tau / 2})")
    k = len(path)
    entries = [e for e in trajectory.events if e.section is Section.SIGMA_IN]
    rep = FollowReport(follows=False)
    rep.t = [e.t for e in entries[: k + 1]]
    if len(entries) < k + 1:
        rep.violations.append((len(entries), "trajectory ends before the required entries into the block"))
        return rep
    for j in range(1, k + 1):
        tube = trajectory.tubes[j - 1]
        z = 0.5 * (tube.t_out + tube.t_in)
        rep.z.append(z)
        if not rep.t[j - 1] < z < rep.t[j]:
            rep.violations.append((j, "visit time does not interleave the entry times"))
        if tube.symbol != path[j - 1]:
            rep.violations.append((j, f"passes connection {int(tube.symbol)} instead of {int(path[j - 1])}"))
        if tube.distance(z) > tube_radius:
            rep.violations.append((j, f"misses the window V{int(path[j - 1])}"))
        if tube.max_distance > network_radius:
            rep.violations.append((j, "leaves the network neighbourhood"))
    for j in range(1, k):
        inside = [e for e in trajectory.events if rep.z[j - 1] < e.t < rep.z[j]]
        kinds = [e.section for e in inside]
        if kinds != [Section.SIGMA_IN, Section.SIGMA_OUT]:
            rep.violations.append((j, "block visits between windows do not form one interval"))
    rep.violations.sort(key=lambda v: v[0])
    rep.follows = not rep.violations
    return rep
