from .bloch_maxwell import BlochMaxwellSolver, propagate
from .presets import preset, preset_names
from .scenarios import load_scenario, serialize_scenario

__all__ = ['BlochMaxwellSolver', 'propagate', 'preset', 'preset_names', 'load_scenario', 'serialize_scenario']
