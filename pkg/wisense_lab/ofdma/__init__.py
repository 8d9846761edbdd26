# OFDMA resource-unit module
from .resource_units import (
    RuEntry,
    RuId,
    RuLayout,
    range_granularity,
    ru_layout,
    slice_ru,
    slice_subcarriers,
)

__all__ = [
    "RuEntry",
    "RuId",
    "RuLayout",
    "range_granularity",
    "ru_layout",
    "slice_ru",
    "slice_subcarriers",
]
