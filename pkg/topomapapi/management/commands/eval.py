"""Full evaluation: one exploration, every map mode, all trials"""
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from topomapapi.exceptions import TopoMapError
from topomapapi.harness.experiment import run_experiment
from topomapapi.models import ExperimentReport
from topomapapi.world.worldfile import save_grid

from ._options import (RUN_ERROR, add_config_arguments, config_from_options, dump,
                       fail_on_trials)

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = "Compare map modes on one world and write a metrics report"

    def add_arguments(self, parser):
        parser.add_argument("world", help="world file, or the name of a bundled world")
        parser.add_argument("--modes", help="comma separated, e.g. fht,main_only,feature_only")
        parser.add_argument("--out", help="write the report JSON here")
        parser.add_argument("--grid-out", help="write the explored grid here, for plan --grid")
        parser.add_argument("--artifacts", help="directory for per-mode maps and renders")
        parser.add_argument("--store", action="store_true", help="save as an ExperimentReport")
        add_config_arguments(parser)

    def handle(self, *args, **options):
        modes = None
        if options["modes"]:
            modes = [m.strip() for m in options["modes"].split(",") if m.strip()]
        config = config_from_options(options, world=options["world"], modes=modes)
        try:
            report = run_experiment(config, config.modes, options["artifacts"])
        except (OSError, TopoMapError) as ex:
            raise CommandError(str(ex), returncode=RUN_ERROR) from ex

        text = dump(report.as_dict())
        if options["out"]:
            Path(options["out"]).write_text(text + "\n")
            logger.info("report written to %s", options["out"])
        else:
            self.stdout.write(text)
        if options["grid_out"]:
            Path(options["grid_out"]).write_text(save_grid(report.explored))
        if options["store"]:
            ExperimentReport.from_run(report).save()

        for mode, metrics in report.modes.items():
            self.stderr.write(
                f"{mode}: {metrics.storage_bytes} bytes, success rate {metrics.success_rate}")
        fail_on_trials(report.failed_trials, "trials")
