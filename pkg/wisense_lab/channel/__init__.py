# Channel simulation module
from .geometry import PathGeometry, path_geometry
from .grid import CaptureSchedule, CfrTensor, GridConfig
from .impairments import ImpairmentParams, add_noise, apply_impairments
from .scene import (
    ActivityClass,
    MicroMotion,
    Scene,
    ScattererTrajectory,
    StaticPath,
    generate_activity_scene,
)
from .synthesis import synthesize_cfr

__all__ = [
    "PathGeometry",
    "path_geometry",
    "CaptureSchedule",
    "CfrTensor",
    "GridConfig",
    "ImpairmentParams",
    "add_noise",
    "apply_impairments",
    "ActivityClass",
    "MicroMotion",
    "Scene",
    "ScattererTrajectory",
    "StaticPath",
    "generate_activity_scene",
    "synthesize_cfr",
]
