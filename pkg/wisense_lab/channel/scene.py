"""Propagation ground truth: static multipath plus moving point scatterers."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from wisense_lab.channel.geometry import los_delay
from wisense_lab.errors import ConfigurationError, DegenerateGeometryError

logger = logging.getLogger(__name__)

DEFAULT_TX_POS = (0.0, 0.0)
DEFAULT_RX_POS = (4.0, 0.0)
# Area the subject moves in, off to one side of the 4 m link: (x_min, x_max, y_min, y_max).
# Every point keeps the bistatic path-rate gain |u_tx + u_rx| between 1.5 and 1.9.
DEFAULT_ROOM = (0.5, 3.5, 2.5, 4.0)
MIN_SEGMENT_LENGTH = 0.5  # m


class ActivityClass(Enum):
    """Activity labels, in classifier index order"""
    EMPTY = "empty"
    IN_PLACE = "in_place"
    WALKING = "walking"
    RUNNING = "running"

    @property
    def index(self) -> int:
        return _CLASS_ORDER.index(self)

    @classmethod
    def from_index(cls, index: int) -> "ActivityClass":
        return _CLASS_ORDER[index]

    @classmethod
    def names(cls) -> List[str]:
        return [c.value for c in _CLASS_ORDER]


_CLASS_ORDER = [
    ActivityClass.EMPTY,
    ActivityClass.IN_PLACE,
    ActivityClass.WALKING,
    ActivityClass.RUNNING,
]

# (low, high) bounds of the class-specific random draws
SPEED_RANGES = {
    ActivityClass.WALKING: (1.0, 1.8),
    ActivityClass.RUNNING: (2.2, 3.2),
}
# Orbit radius (m) and rate (Hz); orbit speed 2 pi f A is 0.08-0.13 m/s in place,
# 0.4-0.63 m/s for gait and beyond the 3.46 m/s Doppler limit when running
MICRO_AMPLITUDE = {
    ActivityClass.IN_PLACE: (0.015, 0.02),
    ActivityClass.WALKING: (0.04, 0.05),
    ActivityClass.RUNNING: (0.16, 0.2),
}
MICRO_FREQUENCY = {
    ActivityClass.IN_PLACE: (0.8, 1.0),
    ActivityClass.WALKING: (1.6, 2.0),
    ActivityClass.RUNNING: (2.6, 3.2),
}
BODY_REFLECTIVITY = (0.35, 0.45)


@dataclass(frozen=True)
class StaticPath:
    """A time-invariant path: LOS or a wall reflection"""
    delay: float
    gain: complex
    aoa: float = 0.0

    def __post_init__(self):
        if not self.delay >= 0:
            raise ConfigurationError(f"path delay must be non-negative, got {self.delay}")


@dataclass(frozen=True)
class MicroMotion:
    """Sinusoidal displacement superposed on a trajectory.

    ``ellipticity`` scales the quadrature swing across ``direction``: 0 is a
    straight back-and-forth, 1 a circular orbit of radius ``amplitude``.
    """
    amplitude: float
    frequency: float
    direction: float = 0.0
    phase: float = 0.0
    ellipticity: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.ellipticity <= 1.0:
            raise ConfigurationError(f"ellipticity must be in [0, 1], got {self.ellipticity}")

    def displacement(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        angle = 2 * np.pi * self.frequency * t + self.phase
        along = np.array([np.cos(self.direction), np.sin(self.direction)])
        across = np.array([-along[1], along[0]])
        return self.amplitude * (
            np.sin(angle)[..., None] * along
            + self.ellipticity * np.cos(angle)[..., None] * across
        )

    
    def peak_speed(self) -> float:
        return 2 * np.pi * self.frequency * self.amplitude


@dataclass(frozen=True, eq=False)
class ScattererTrajectory:
    """Point reflector on a piecewise-linear path.

    ``waypoints`` has shape (M, 2) and ``knot_times`` shape (M,), strictly
    increasing. The path holds still before the first and after the last knot.
    """
    waypoints: np.ndarray
    knot_times: np.ndarray
    reflectivity: complex
    micro_motion: Optional[MicroMotion] = None

    def __post_init__(self):
        waypoints = np.atleast_2d(np.asarray(self.waypoints, dtype=float))
        knots = np.atleast_1d(np.asarray(self.knot_times, dtype=float))
        if waypoints.shape[-1] != 2 or waypoints.shape[0] != knots.shape[0]:
            raise ConfigurationError("waypoints must be (M, 2) with one knot time each")
        if knots.size > 1 and np.any(np.diff(knots) <= 0):
            raise ConfigurationError("knot_times must be strictly increasing")
        if abs(self.reflectivity) == 0:
            raise ConfigurationError("scatterer reflectivity must be non-zero")
        object.__setattr__(self, "waypoints", waypoints)
        object.__setattr__(self, "knot_times", knots)

    @classmethod
    def stationary(
        cls, position, reflectivity: complex, micro_motion: Optional[MicroMotion] = None
    ) -> "ScattererTrajectory":
        return cls(np.asarray([position], dtype=float), np.zeros(1), reflectivity, micro_motion)

    def path_position(self, t) -> np.ndarray:
        """Body position without micro-motion, shape t.shape + (2,)"""
        t = np.asarray(t, dtype=float)
        x = np.interp(t, self.knot_times, self.waypoints[:, 0])
        y = np.interp(t, self.knot_times, self.waypoints[:, 1])
        return np.stack([x, y], axis=-1)

    def position(self, t) -> np.ndarray:
        pos = self.path_position(t)
        if self.micro_motion is not None:
            pos = pos + self.micro_motion.displacement(t)
        return pos

    def segment_speeds(self) -> np.ndarray:
        if self.knot_times.size < 2:
            return np.zeros(0)
        lengths = np.linalg.norm(np.diff(self.waypoints, axis=0), axis=1)
        return lengths / np.diff(self.knot_times)

    @property
    def is_moving(self) -> bool:
        return self.knot_times.size > 1


@dataclass(frozen=True, eq=False)
class Scene:
    tx_pos: Tuple[float, float]
    rx_pos: Tuple[float, float]
    static_paths: List[StaticPath] = field(default_factory=list)
    scatterers: List[ScattererTrajectory] = field(default_factory=list)
    label: ActivityClass = ActivityClass.EMPTY

    def __post_init__(self):
        if np.allclose(self.tx_pos, self.rx_pos):
            raise DegenerateGeometryError("tx_pos and rx_pos must differ")
        if not isinstance(self.label, ActivityClass):
            raise ConfigurationError(f"unknown activity label {self.label!r}")

    @property
    def is_static(self) -> bool:
        return all(
            not s.is_moving and s.micro_motion is None for s in self.scatterers
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tx_pos": list(self.tx_pos),
            "rx_pos": list(self.rx_pos),
            "label": self.label.value,
            "static_paths": [
                {"delay": p.delay, "gain": [p.gain.real, p.gain.imag], "aoa": p.aoa}
                for p in self.static_paths
            ],
            "scatterers": len(self.scatterers),
        }


def _random_phase(rng: np.random.Generator) -> complex:
    return complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))


def _room_point(rng: np.random.Generator, room) -> np.ndarray:
    x_min, x_max, y_min, y_max = room
    return np.array([rng.uniform(x_min, x_max), rng.uniform(y_min, y_max)])


def _static_paths(
    rng: np.random.Generator, tx_pos, rx_pos
) -> List[StaticPath]:
    """LOS plus 2-4 wall reflections arriving later and weaker"""
    paths = [StaticPath(delay=los_delay(tx_pos, rx_pos), gain=1.0 + 0j, aoa=0.0)]
    n_walls = int(rng.integers(2, 5))
    for _ in range(n_walls):
        excess = rng.uniform(5e-9, 40e-9)
        magnitude = rng.uniform(0.15, 0.4)
        paths.append(
            StaticPath(
                delay=paths[0].delay + excess,
                gain=magnitude * _random_phase(rng),
                aoa=rng.uniform(-np.pi / 3, np.pi / 3),
            )
        )
    return paths


def _waypoint_trajectory(
    rng: np.random.Generator, speed_range, duration: float, room
) -> Tuple[np.ndarray, np.ndarray]:
    """Random-waypoint walk; one (waypoint, speed) draw pair per segment.

    The draw order does not depend on the speed range, so two classes sharing
    a seed follow the same waypoints and only differ in pace.
    """
    low, high = speed_range
    points = [_room_point(rng, room)]
    knots = [0.0]
    while knots[-1] < duration:
        candidate = _room_point(rng, room)
        while np.linalg.norm(candidate - points[-1]) < MIN_SEGMENT_LENGTH:
            candidate = _room_point(rng, room)
        speed = low + rng.uniform() * (high - low)
        knots.append(knots[-1] + np.linalg.norm(candidate - points[-1]) / speed)
        points.append(candidate)
    return np.asarray(points), np.asarray(knots)


def _micro_motion(rng: np.random.Generator, label: ActivityClass) -> MicroMotion:
    """Circular orbit: its path-rate swing reaches the same peak on any heading"""
    amp_lo, amp_hi = MICRO_AMPLITUDE[label]
    freq_lo, freq_hi = MICRO_FREQUENCY[label]
    return MicroMotion(
        amplitude=rng.uniform(amp_lo, amp_hi),
        frequency=rng.uniform(freq_lo, freq_hi),
        direction=rng.uniform(0, 2 * np.pi),
        phase=rng.uniform(0, 2 * np.pi),
        ellipticity=1.0,
    )


def generate_activity_scene(
    label: ActivityClass,
    duration: float,
    seed: int,
    tx_pos=DEFAULT_TX_POS,
    rx_pos=DEFAULT_RX_POS,
    room=DEFAULT_ROOM,
) -> Scene:
    """Seeded scene for one activity class"""
    if not duration > 0:
        raise ConfigurationError(f"duration must be positive, got {duration}")
    label = ActivityClass(label)

    # Independent streams: static multipath, body path, micro-motion/reflectivity
    static_seq, path_seq, body_seq = np.random.SeedSequence(seed).spawn(3)
    static_paths = _static_paths(np.random.default_rng(static_seq), tx_pos, rx_pos)
    path_rng = np.random.default_rng(path_seq)
    body_rng = np.random.default_rng(body_seq)

    scatterers: List[ScattererTrajectory] = []
    if label is ActivityClass.IN_PLACE:
        scatterers.append(
            ScattererTrajectory.stationary(
                _room_point(path_rng, room),
                reflectivity=body_rng.uniform(*BODY_REFLECTIVITY) * _random_phase(body_rng),
                micro_motion=_micro_motion(body_rng, label),
            )
        )
    elif label in SPEED_RANGES:
        waypoints, knots = _waypoint_trajectory(path_rng, SPEED_RANGES[label], duration, room)
        scatterers.append(
            ScattererTrajectory(
                waypoints,
                knots,
                reflectivity=body_rng.uniform(*BODY_REFLECTIVITY) * _random_phase(body_rng),
                micro_motion=_micro_motion(body_rng, label),
            )
        )

    logger.debug(
        "scene %s seed=%d: %d static paths, %d scatterers",
        label.value, seed, len(static_paths), len(scatterers),
    )
    return Scene(
        tx_pos=tuple(tx_pos),
        rx_pos=tuple(rx_pos),
        static_paths=static_paths,
        scatterers=scatterers,
        label=label,
    )


def path_length_rate(
    scene: Scene, trajectory: ScattererTrajectory, t: np.ndarray, with_micro_motion: bool = False
) -> np.ndarray:
    """Numerical derivative of the bistatic path length along a trajectory (m/s)"""
    t = np.asarray(t, dtype=float)
    positions = trajectory.position(t) if with_micro_motion else trajectory.path_position(t)
    tx = np.asarray(scene.tx_pos)
    rx = np.asarray(scene.rx_pos)
    lengths = np.linalg.norm(positions - tx, axis=-1) + np.linalg.norm(positions - rx, axis=-1)
    return np.gradient(lengths, t)
