import hashlib
import json
from dataclasses import dataclass, field
from typing import Dict, List


def scenario_hash(params):
    """sha256 of the canonical JSON form of a normalized scenario"""
    canonical = json.dumps(params.to_dict(), sort_keys=True, separators=(',', ':'), default=float)
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    scenario_hash: str
    grid: Dict = field(default_factory=dict)
    files: List[str] = field(default_factory=list)
    notes: Dict = field(default_factory=dict)
    wall_time: float = 0.0
    tool_version: str = ''

    def add_file(self, path):
        if path not in self.files:
            self.files.append(path)

    def to_dict(self):
        return {
            'subcommand': self.subcommand,
            'scenario_hash': self.scenario_hash,
            'grid': self.grid,
            'files': list(self.files),
            'notes': self.notes,
            'wall_time': self.wall_time,
            'tool_version': self.tool_version
        }
