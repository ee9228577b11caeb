"""Explore a world and write the map built along the way"""
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from topomapapi.exceptions import TopoMapError
from topomapapi.fht.codec import serialize
from topomapapi.harness.experiment import build_maps
from topomapapi.harness.render import export_render
from topomapapi.models import StoredMap
from topomapapi.world.worldfile import load_world_file, save_grid

from ._options import RUN_ERROR, add_config_arguments, config_from_options

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = "Explore a world with frontier exploration and build a map"

    def add_arguments(self, parser):
        parser.add_argument("world", help="world file, or the name of a bundled world")
        add_config_arguments(parser)
        parser.add_argument("--out", help="write the map JSON here")
        parser.add_argument("--grid-out", help="write the explored grid here, for plan --grid")
        parser.add_argument("--store", metavar="NAME", help="save the map as a StoredMap")
        parser.add_argument("--render", metavar="PATH", help=".txt, .png, .ppm or .pbm picture")
        parser.add_argument("--budget", type=int)

    def handle(self, *args, **options):
        config = config_from_options(options, world=options["world"], budget=options["budget"])
        try:
            world = load_world_file(config.world)
            result, maps = build_maps(world, config, (config.mode,))
        except (OSError, TopoMapError) as ex:
            raise CommandError(str(ex), returncode=RUN_ERROR) from ex
        fht_map = maps[config.mode]

        if options["out"]:
            Path(options["out"]).write_bytes(serialize(fht_map))
            logger.info("map written to %s", options["out"])
        if options["grid_out"]:
            Path(options["grid_out"]).write_text(save_grid(result.explored))
            logger.info("explored grid written to %s", options["grid_out"])
        if options["render"]:
            export_render(fht_map, result.explored, result.trajectory, options["render"])
        if options["store"]:
            stored = StoredMap.from_map(fht_map, options["store"], world.name, config.mode)
            stored.save()
            logger.info("map stored as %s (id %d)", stored.name, stored.id)

        counts = fht_map.counts()
        state = "finished" if result.finished else "stopped at the step budget"
        self.stdout.write(
            f"{world.name}: exploration {state} after {result.steps} steps, "
            f"{counts['main']} main, {counts['support']} support, {counts['edges']} edges")
