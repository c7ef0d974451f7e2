"""
Subcommand registry. Each module defines one Command, registered on the
app by create_app; the CLI builds one argparse subparser per command.
"""
import os
import time
from dataclasses import dataclass, field
from typing import Any

from dipolar_eit import __version__
from dipolar_eit.errors import ScenarioError
from dipolar_eit.models.manifest import RunManifest, scenario_hash
from dipolar_eit.services.presets import preset
from dipolar_eit.services.scenarios import load_scenario, read_document
from dipolar_eit.utils.writers import ensure_output_dir, write_json, write_table

MANIFEST_NAME = 'manifest.json'

# Units of columns shared by several tables
FREQUENCY = 'gamma'
LENGTH = 'L'
TIME = '1/gamma'
INVERSE_LENGTH = '1/L'
DIMENSIONLESS = ''


class Command:
    """A CLI subcommand with its own arguments and handler, registered like a blueprint"""

    def __init__(self, name, help, default_preset=None):
        self.name = name
        self.help = help
        self.default_preset = default_preset
        self.arguments = []
        self.run = None

    def argument(self, *flags, **kwargs):
        self.arguments.append((flags, kwargs))
        return self

    def handler(self, fn):
        self.run = fn
        return fn

    def add_parser(self, subparsers, parents):
        parser = subparsers.add_parser(self.name, help=self.help, parents=parents)
        for flags, kwargs in self.arguments:
            parser.add_argument(*flags, **kwargs)
        return parser


@dataclass
class RunContext:
    """Everything a command handler needs: app, arguments, scenario and output bookkeeping"""
    app: Any
    args: Any
    params: Any
    out_dir: str
    manifest: RunManifest
    started: float = field(default_factory=time.perf_counter)

    @classmethod
    def open(cls, app, command, args):
        params = resolve_scenario(args, command.default_preset)
        out_dir = ensure_output_dir(args.out or app.config['OUTPUT_DIR'])
        manifest = RunManifest(
            subcommand=command.name,
            scenario_hash=scenario_hash(params),
            tool_version=__version__
        )
        app.logger.info(f"Running {command.name} on scenario '{params.name}' into {out_dir}")
        return cls(app=app, args=args, params=params, out_dir=out_dir, manifest=manifest)

    @property
    def config(self):
        return self.app.config

    @property
    def n_z(self):
        return self.args.grid_nz or self.config['DEFAULT_NZ']

    @property
    def stride(self):
        return self.args.stride or self.config['DEFAULT_STRIDE']

    @property
    def threads(self):
        return self.args.threads or self.config['DEFAULT_THREADS']

    def emit(self, filename, table, units):
        """Write one CSV into the output directory and list it in the manifest"""
        write_table(table, os.path.join(self.out_dir, filename), units)
        self.manifest.add_file(filename)
        return filename

    def finish(self):
        self.manifest.wall_time = time.perf_counter() - self.started
        self.manifest.add_file(MANIFEST_NAME)
        write_json(os.path.join(self.out_dir, MANIFEST_NAME), self.manifest.to_dict())
        self.app.logger.info(
            f"{self.manifest.subcommand} finished in {self.manifest.wall_time:.2f}s, "
            f"{len(self.manifest.files)} file(s) written"
        )


def resolve_scenario(args, default_preset=None):
    """Scenario from --scenario (optionally on top of --preset), --preset, or the command default"""
    if args.scenario:
        document = read_document(args.scenario)
        if args.preset and 'preset' not in document:
            document['preset'] = args.preset
        return load_scenario(document)
    name = args.preset or default_preset
    if name is None:
        raise ScenarioError("Either --scenario or --preset is required")
    return preset(name)
