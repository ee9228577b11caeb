"""Relocalization trials against a saved map"""
from django.core.management.base import BaseCommand, CommandError

from topomapapi.exceptions import TopoMapError
from topomapapi.harness.experiment import isolated, reloc_trial
from topomapapi.harness.metrics import MetricsReport
from topomapapi.fht.codec import storage_bytes
from topomapapi.world.worldfile import load_world_file

from ._options import (RUN_ERROR, add_config_arguments, config_from_options, dump,
                       fail_on_trials, read_map)


class Command(BaseCommand):
    help = "Run random-walk relocalization trials against a map"

    def add_arguments(self, parser):
        parser.add_argument("map", help="map JSON written by explore")
        parser.add_argument("world", help="world file, or the name of a bundled world")
        parser.add_argument("--trials", type=int)
        add_config_arguments(parser)

    def handle(self, *args, **options):
        config = config_from_options(options, world=options["world"],
                                     reloc_trials=options["trials"])
        fht_map = read_map(options["map"])
        try:
            world = load_world_file(config.world)
        except (OSError, TopoMapError) as ex:
            raise CommandError(str(ex), returncode=RUN_ERROR) from ex

        report = MetricsReport(config.mode, storage_bytes(fht_map), fht_map.counts())
        for trial in range(config.reloc_trials):
            report.reloc_rows.append(isolated(
                "trial", trial, lambda t=trial: reloc_trial(fht_map, world, config, config.mode, t)))

        data = report.as_dict()
        del data["plan_pairs"], data["c_path"], data["blocked_routes"]
        self.stdout.write(dump(data))
        fail_on_trials(report.failed, "relocalization trials")
