import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from topomapapi.exceptions import ConfigurationError
from topomapapi.fht import deserialize
from topomapapi.harness import load_config, with_mode
from topomapapi.models import ExperimentReport, StoredMap
from topomapapi.world import CellState, load_grid, save_world

from .scenes import two_rooms

SMALL_RUN = """
budget = 200
seed = 5
reloc_trials = 1
plan_pairs = 1
walk_length = 10.0
start = [1.0, 1.5]
"""


class ConfigTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, name, text):
        path = Path(self.tmp.name) / name
        path.write_text(text)
        return path

    def test_file_then_overrides(self):
        """
        Ensure command line values win over the file, and the file over settings
        """
        path = self.write("run.toml", "seed = 9\nbudget = 100\n")
        config = load_config(path, budget=50)
        self.assertEqual(config.seed, 9)
        self.assertEqual(config.budget, 50)
        self.assertEqual(config.sigma_c, 2.65)

    def test_bundled_config_by_name(self):
        config = load_config("loop_corridor.toml")
        self.assertEqual(config.seed, 3)
        self.assertEqual(config.start, (1.5, 1.5))

    def test_unknown_key(self):
        with self.assertRaises(ConfigurationError):
            load_config(self.write("bad.toml", "colour = 'red'\n"))

    def test_gamma_order(self):
        """
        Ensure gamma2 must stay below gamma1
        """
        with self.assertRaises(ConfigurationError):
            load_config(gamma1=0.5, gamma2=0.7)

    def test_malformed_toml(self):
        with self.assertRaises(ConfigurationError):
            load_config(self.write("broken.toml", "seed = = 3\n"))

    def test_with_mode(self):
        config = load_config()
        self.assertEqual(with_mode(config, "main_only").mode, "main_only")
        with self.assertRaises(ConfigurationError):
            with_mode(config, "dense")


class CommandTests(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)
        self.world = self.dir / "rooms.world"
        self.world.write_text(save_world(two_rooms(door=(10, 20))))
        self.config = self.dir / "small.toml"
        self.config.write_text(SMALL_RUN)
        self.grid = self.dir / "rooms.grid"

    def explore(self, *extra):
        out = StringIO()
        map_path = self.dir / "rooms.json"
        call_command("explore", str(self.world), "--config", str(self.config), "--out",
                     str(map_path), "--grid-out", str(self.grid), *extra, stdout=out)
        return map_path, out.getvalue()

    def test_explore_writes_map(self):
        """
        Ensure explore writes a map JSON holding main nodes
        """
        map_path, output = self.explore()
        fht_map = deserialize(map_path.read_bytes())
        self.assertGreater(len(fht_map.main_nodes()), 0)
        self.assertIn("rooms: exploration", output)

    def test_explore_stores_map(self):
        """
        Ensure explore can save the map as a StoredMap
        """
        self.explore("--store", "rooms-fht")
        stored = StoredMap.objects.get(name="rooms-fht")
        self.assertEqual(stored.world, "rooms")
        self.assertEqual(stored.mode, "fht")

    def test_missing_config_file(self):
        """
        Ensure a missing config file exits with the configuration error code
        """
        with self.assertRaises(CommandError) as raised:
            call_command("explore", str(self.world), "--config", str(self.dir / "none.toml"))
        self.assertEqual(raised.exception.returncode, 2)

    def test_unknown_mode(self):
        with self.assertRaises(CommandError) as raised:
            call_command("explore", str(self.world), "--mode", "dense")
        self.assertEqual(raised.exception.returncode, 2)

    def test_missing_world(self):
        """
        Ensure a missing world file exits with the run error code
        """
        with self.assertRaises(CommandError) as raised:
            call_command("explore", str(self.dir / "nowhere.world"), "--config",
                         str(self.config))
        self.assertEqual(raised.exception.returncode, 1)

    def test_unreadable_map(self):
        broken = self.dir / "broken.json"
        broken.write_text('{"version": 1, "meta"')
        with self.assertRaises(CommandError) as raised:
            call_command("render", str(broken))
        self.assertEqual(raised.exception.returncode, 1)

    def test_render_to_stdout(self):
        map_path, _ = self.explore()
        out = StringIO()
        call_command("render", str(map_path), stdout=out)
        self.assertIn("main nodes:", out.getvalue())

    def test_relocalize_report(self):
        """
        Ensure the relocalize report carries trials and no planning keys
        """
        map_path, _ = self.explore()
        out = StringIO()
        call_command("relocalize", str(map_path), str(self.world), "--config",
                     str(self.config), stdout=out)
        report = json.loads(out.getvalue())
        self.assertEqual(len(report["reloc_trials"]), 1)
        self.assertNotIn("plan_pairs", report)
        self.assertNotIn("blocked_routes", report)

    def test_plan_report(self):
        """
        Ensure the plan report carries planning pairs and no relocalization keys
        """
        map_path, _ = self.explore()
        out = StringIO()
        call_command("plan", str(map_path), str(self.world), "--config", str(self.config),
                     "--grid", str(self.grid), stdout=out)
        report = json.loads(out.getvalue())
        self.assertEqual(len(report["plan_pairs"]), 1)
        self.assertNotIn("reloc_trials", report)

    def test_plan_requires_explored_grid(self):
        """
        Ensure planning refuses to fall back to the full world map
        """
        map_path, _ = self.explore()
        with self.assertRaises(CommandError) as raised:
            call_command("plan", str(map_path), str(self.world), "--config", str(self.config))
        self.assertEqual(raised.exception.returncode, 2)
        self.assertIn("--grid", str(raised.exception))

    def test_explored_grid_is_written(self):
        self.explore()
        grid = load_grid(self.grid.read_text())
        world = two_rooms(door=(10, 20))
        self.assertEqual(grid.cells.shape, world.truth.cells.shape)
        seen = grid.cells == CellState.FREE
        self.assertTrue(seen.any())
        self.assertTrue((world.truth.cells[seen] == CellState.FREE).all())

    def test_eval_writes_and_stores_report(self):
        """
        Ensure eval writes the report, the explored grid and artifacts, then stores the report
        """
        report_path = self.dir / "report.json"
        call_command("eval", str(self.world), "--config", str(self.config), "--modes",
                     "fht,main_only", "--out", str(report_path), "--artifacts",
                     str(self.dir / "artifacts"), "--grid-out", str(self.grid), "--store",
                     stderr=StringIO())
        report = json.loads(report_path.read_text())
        self.assertEqual(set(report["modes"]), {"fht", "main_only"})
        self.assertTrue((self.dir / "artifacts" / "rooms_fht.json").exists())
        self.assertEqual(load_grid(self.grid.read_text()).width, two_rooms().truth.width)
        stored = ExperimentReport.objects.get()
        self.assertEqual(stored.world, "rooms")
        self.assertEqual(stored.payload["modes"].keys(), report["modes"].keys())
