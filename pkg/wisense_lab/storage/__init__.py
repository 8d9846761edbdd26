# Storage module
from .capture import CaptureMeta, payload_size, read_capture, read_header, write_capture
from .config import RunConfig, load_config, save_config

__all__ = [
    "CaptureMeta",
    "payload_size",
    "read_capture",
    "read_header",
    "write_capture",
    "RunConfig",
    "load_config",
    "save_config",
]
