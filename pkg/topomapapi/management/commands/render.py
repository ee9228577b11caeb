"""Draw a saved map"""
from django.core.management.base import BaseCommand, CommandError

from topomapapi.exceptions import TopoMapError
from topomapapi.harness.render import export_render
from topomapapi.world.worldfile import load_grid

from ._options import RUN_ERROR, read_map


class Command(BaseCommand):
    help = "Render a map as text or as a .png/.ppm/.pbm picture"

    def add_arguments(self, parser):
        parser.add_argument("map", help="map JSON written by explore")
        parser.add_argument("--out", help="output file; text on stdout when absent")
        parser.add_argument("--grid", help="explored grid file drawn underneath")

    def handle(self, *args, **options):
        fht_map = read_map(options["map"])
        explored = None
        try:
            if options["grid"]:
                with open(options["grid"], encoding="utf-8") as grid_file:
                    explored = load_grid(grid_file.read())
            text = export_render(fht_map, explored, path=options["out"])
        except (OSError, TopoMapError) as ex:
            raise CommandError(str(ex), returncode=RUN_ERROR) from ex
        if not options["out"]:
            self.stdout.write(text)
