"""Planning pairs on a saved map"""
from django.core.management.base import BaseCommand, CommandError

from topomapapi.exceptions import TopoMapError
from topomapapi.fht.codec import storage_bytes
from topomapapi.harness.experiment import isolated, plan_trial
from topomapapi.harness.metrics import MetricsReport
from topomapapi.world.worldfile import load_grid, load_world_file

from ._options import (CONFIG_ERROR, RUN_ERROR, add_config_arguments, config_from_options,
                       dump, fail_on_trials, read_map)


class Command(BaseCommand):
    help = "Plan and drive between random pairs of explored cells"

    def add_arguments(self, parser):
        parser.add_argument("map", help="map JSON written by explore")
        parser.add_argument("world", help="world file, or the name of a bundled world")
        parser.add_argument("--pairs", type=int)
        parser.add_argument("--grid", help="explored grid written by explore or eval --grid-out")
        add_config_arguments(parser)

    def handle(self, *args, **options):
        if not options["grid"]:
            raise CommandError("--grid is required: planning runs on the explored grid, "
                               "not the full world", returncode=CONFIG_ERROR)
        config = config_from_options(options, world=options["world"],
                                     plan_pairs=options["pairs"])
        fht_map = read_map(options["map"])
        try:
            world = load_world_file(config.world)
            with open(options["grid"], encoding="utf-8") as grid_file:
                explored = load_grid(grid_file.read())
        except (OSError, TopoMapError) as ex:
            raise CommandError(str(ex), returncode=RUN_ERROR) from ex

        report = MetricsReport(config.mode, storage_bytes(fht_map), fht_map.counts())
        for pair in range(config.plan_pairs):
            report.plan_rows.append(isolated(
                "pair", pair, lambda p=pair: plan_trial(fht_map, world, explored, config, p)))

        data = report.as_dict()
        for key in ("reloc_trials", "success_rate", "l_reloca", "eps_t", "eps_theta"):
            del data[key]
        self.stdout.write(dump(data))
        fail_on_trials(report.failed, "planning pairs")
