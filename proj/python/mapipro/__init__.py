"""EDP-optimal memory placement for embedded applications.

Thin re-export of the native extension: solve placements, simulate
power-failure schedules, compare strategies, and emit linker fragments.
"""

from ._mapipro import (
    AppProfile,
    Device,
    Error,
    InfeasibleError,
    compare,
    default_f5529,
    default_fr6989,
    device_from_json,
    edp_stable,
    emit_linker,
    emit_placement_table,
    load_device,
    load_profile,
    profile_from_json,
    random_profile,
    simulate,
    solve,
)

__all__ = [
    "AppProfile",
    "Device",
    "Error",
    "InfeasibleError",
    "compare",
    "default_f5529",
    "default_fr6989",
    "device_from_json",
    "edp_stable",
    "emit_linker",
    "emit_placement_table",
    "load_device",
    "load_profile",
    "profile_from_json",
    "random_profile",
    "simulate",
    "solve",
]
