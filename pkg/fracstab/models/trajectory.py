"""Trajectory model for Fracstab."""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from fracstab.models.enums import Outcome

FloatArray = NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded simulation history.

    Row i of ``states`` is the state at ``times[i]``; the norm and the two
    Caputo-derivative tracks share that indexing. ``stop_step`` is the index
    of the last integration step taken (not the last recorded row).
    """

    times: FloatArray
    states: FloatArray
    norm_track: FloatArray
    k1_track: FloatArray
    k2_track: FloatArray
    outcome: Outcome
    final_state: FloatArray
    stop_step: int

    @property
    def n(self) -> int:
        return int(self.states.shape[1])

    @property
    def initial_norm(self) -> float:
        """Norm of the initial state, independent of the recorded norm track."""
        return float(np.linalg.norm(self.states[0]))

    @property
    def final_norm(self) -> float:
        return float(np.linalg.norm(self.final_state))

    @property
    def k1_sup(self) -> float:
        return float(np.max(self.k1_track))

    @property
    def k2_sup(self) -> float:
        return float(np.max(self.k2_track))

    def with_norm_track(self, norm_track: FloatArray) -> "Trajectory":
        """Copy with a replaced norm track (for envelope experiments)."""
        return Trajectory(
            times=self.times,
            states=self.states,
            norm_track=np.asarray(norm_track, dtype=float),
            k1_track=self.k1_track,
            k2_track=self.k2_track,
            outcome=self.outcome,
            final_state=self.final_state,
            stop_step=self.stop_step,
        )
