import math

import networkx as nx
import numpy as np
from django.test import SimpleTestCase

from topomapapi.exceptions import ConfigurationError, NodeKindError, ObstacleError
from topomapapi.exploration import ExploreConfig, explore
from topomapapi.fht import (BuilderState, FhtMap, MapBuilder, MapMeta, MapNode, NodeKind, Rect,
                            add_edges, bridge_along_trail, build_step, cell_rect, entropy,
                            finalize_previous_rect, grow_free_rect, place_along_path, refine_map,
                            reloc_capability, repair_connectivity, update_main_node,
                            update_support_node)
from topomapapi.fht.refine import support_factory
from topomapapi.world import (CellState, Descriptor, HistogramDescriptor, LaserScan,
                              OccupancyGrid, Pose2, segment_in_free)

from .scenes import box_world, corner_corridor, corner_trail, random_world, ring_world, two_rooms

FLAT = Descriptor(np.full(10, 0.05))
SPREAD = Descriptor(np.linspace(0.05, 0.95, 10))
HALVES = Descriptor(np.array([0.05] * 5 + [0.95] * 5))
SCAN = LaserScan.uniform(np.ones(8), 7.0)


def empty_map(resolution=0.1):
    return FhtMap(MapMeta(10, resolution))


def main_at(fht_map, position, value=2.0):
    return fht_map.add_node(NodeKind.MAIN, position, Rect.around(position, 0.1), FLAT, SCAN, value)


def support_at(fht_map, position):
    return fht_map.add_node(NodeKind.SUPPORT, position, Rect.around(position, 0.1))


class EntropyTests(SimpleTestCase):
    def test_single_bin_has_zero_entropy(self):
        self.assertEqual(entropy(FLAT), 0.0)

    def test_uniform_bins(self):
        self.assertAlmostEqual(entropy(SPREAD), math.log(10))
        self.assertAlmostEqual(entropy(HALVES), math.log(2))

    def test_matches_counting_oracle(self):
        """
        Ensure entropy matches a plain histogram count
        """
        rng = np.random.default_rng(11)
        for _ in range(100):
            values = rng.random(int(rng.integers(1, 40)))
            counts = [0] * 10
            for v in values:
                counts[min(int(v * 10), 9)] += 1
            expected = -sum(c / len(values) * math.log(c / len(values)) for c in counts if c)
            self.assertAlmostEqual(entropy(Descriptor(values)), expected, delta=1e-6)

    def test_components_are_clamped(self):
        self.assertAlmostEqual(entropy(Descriptor([-0.5, 0.05, 1.5, 0.95])), math.log(2))

    def test_capability_sums_main_nodes(self):
        """
        Ensure capability sums a kernel over main nodes only
        """
        fht_map = empty_map()
        main_at(fht_map, (1.0, 0.0), 1.0)
        main_at(fht_map, (2.0, 0.0), 2.0)
        support_at(fht_map, (0.0, 0.0))
        sigma = 2.65
        expected = math.exp(-1 / sigma ** 2) + 2.0 * math.exp(-4 / sigma ** 2)
        self.assertAlmostEqual(reloc_capability(fht_map, (0.0, 0.0), sigma), expected)
        self.assertEqual(reloc_capability(empty_map(), (0.0, 0.0), sigma), 0.0)


class NodeTests(SimpleTestCase):
    def test_support_node_cannot_hold_sensing(self):
        """
        Ensure support nodes refuse a descriptor or scan
        """
        with self.assertRaises(NodeKindError):
            MapNode(0, NodeKind.SUPPORT, (0, 0), Rect(0, 0, 1, 1), descriptor=FLAT)

    def test_main_node_needs_sensing(self):
        with self.assertRaises(NodeKindError):
            MapNode(0, NodeKind.MAIN, (0, 0), Rect(0, 0, 1, 1), FLAT, None, 0.0)

    def test_edges_are_unordered_and_unique(self):
        fht_map = empty_map()
        support_at(fht_map, (0, 0))
        support_at(fht_map, (1, 0))
        self.assertTrue(fht_map.add_edge(1, 0))
        self.assertFalse(fht_map.add_edge(0, 1))
        self.assertEqual(fht_map.sorted_edges(), [(0, 1)])
        with self.assertRaises(ValueError):
            fht_map.add_edge(1, 1)

    def test_builder_state_thresholds(self):
        with self.assertRaises(ConfigurationError):
            BuilderState(gamma1=0.5, gamma2=0.5)


class MainNodeTests(SimpleTestCase):
    def test_first_pose_bootstraps(self):
        """
        Ensure the first pose of an empty map becomes a main node
        """
        fht_map = empty_map()
        node = update_main_node(BuilderState(), fht_map, Pose2(1, 1, 0), SPREAD, SCAN)
        self.assertEqual(node.id, 0)
        self.assertTrue(node.is_main)
        self.assertAlmostEqual(node.entropy, math.log(10))

    def test_candidate_with_highest_entropy_wins(self):
        """
        Ensure the node lands at the candidate with the richest descriptor once
        capability drops below gamma2
        """
        fht_map = empty_map()
        main_at(fht_map, (0.0, 0.0), 2.0)
        state = BuilderState(gamma1=1.0, gamma2=0.5, sigma_c=2.65)
        steps = [(1.0, FLAT), (2.4, FLAT), (2.6, SPREAD), (2.8, HALVES), (3.5, FLAT)]
        created = [update_main_node(state, fht_map, Pose2(x, 0.0, 0.0), d, SCAN)
                   for x, d in steps]
        self.assertEqual(created[:4], [None] * 4)
        self.assertIsNotNone(created[4])
        self.assertEqual(created[4].position, (2.6, 0.0))
        self.assertAlmostEqual(created[4].entropy, math.log(10))
        self.assertFalse(state.in_candidate_phase)
        self.assertEqual(state.candidates, [])

    def test_no_candidates_uses_current_pose(self):
        """
        Ensure a phase that gathered no candidates places the node at the current pose
        """
        fht_map = empty_map()
        main_at(fht_map, (0.0, 0.0), 2.0)
        node = update_main_node(BuilderState(), fht_map, Pose2(7.0, 0.0, 0.0), HALVES, SCAN)
        self.assertEqual(node.position, (7.0, 0.0))


class SupportNodeTests(SimpleTestCase):
    def test_empty_map_never_triggers(self):
        world = two_rooms()
        self.assertIsNone(update_support_node(empty_map(), Pose2(1, 1, 0), world.truth, 3.0, 0.1))

    def test_visible_node_nearby(self):
        world = two_rooms()
        fht_map = empty_map()
        main_at(fht_map, (1.0, 1.5))
        self.assertIsNone(update_support_node(fht_map, Pose2(1.5, 1.5, 0), world.truth, 3.0, 0.1))

    def test_node_behind_wall(self):
        """
        Ensure a node hidden behind a wall triggers a support node
        """
        world = two_rooms()
        fht_map = empty_map()
        main_at(fht_map, (2.5, 1.5))
        node = update_support_node(fht_map, Pose2(3.5, 1.5, 0), world.truth, 3.0, 0.1)
        self.assertEqual(node.kind, NodeKind.SUPPORT)
        self.assertIsNone(node.descriptor)

    def test_far_from_every_node(self):
        world = box_world(100, 40)
        fht_map = empty_map()
        main_at(fht_map, (1.0, 2.0))
        node = update_support_node(fht_map, Pose2(4.5, 2.0, 0), world.truth, 3.0, 0.1)
        self.assertIsNotNone(node)


class EdgeTests(SimpleTestCase):
    def test_edges_only_to_visible_nodes(self):
        world = two_rooms()
        fht_map = empty_map()
        for position in ((1.0, 1.5), (2.0, 1.5), (4.0, 1.5)):
            support_at(fht_map, position)
        new = support_at(fht_map, (1.5, 1.0))
        self.assertEqual(add_edges(fht_map, new, world.truth, 0.1), 2)
        self.assertEqual(fht_map.sorted_edges(), [(0, 3), (1, 3)])

    def test_edges_match_brute_force(self):
        """
        Ensure edges join exactly the pairs with a free straight line
        """
        rng = np.random.default_rng(12)
        world = random_world(rng, 40, 40, density=0.1)
        free = np.argwhere(world.truth.free_mask)
        fht_map = empty_map()
        for row, col in free[rng.choice(len(free), 12, replace=False)]:
            node = support_at(fht_map, world.truth.center_of(row, col))
            add_edges(fht_map, node, world.truth, 0.1)
        expected = set()
        for a in fht_map.nodes:
            for b in fht_map.nodes:
                if a.id < b.id and segment_in_free(world.truth, a.position, b.position, 0.1):
                    expected.add((a.id, b.id))
        self.assertEqual(fht_map.edges, expected)


class RectTests(SimpleTestCase):
    def test_open_grid_fills_completely(self):
        grid = OccupancyGrid(10, 10, 0.1, cells=np.full((10, 10), CellState.FREE, dtype=np.int8))
        rect = grow_free_rect(grid, (0.55, 0.55))
        for got, want in zip(rect.as_list(), (0.0, 0.0, 1.0, 1.0)):
            self.assertAlmostEqual(got, want)

    def test_stops_at_wall(self):
        """
        Ensure rectangle growth stops at the first occupied cell
        """
        cells = np.full((10, 20), CellState.FREE, dtype=np.int8)
        cells[:, 13] = CellState.OCCUPIED
        rect = grow_free_rect(OccupancyGrid(20, 10, 0.1, cells=cells), (0.55, 0.55))
        self.assertAlmostEqual(rect.xmax, 1.3)
        self.assertAlmostEqual(rect.ymax, 1.0)

    def test_extent_limit(self):
        world = box_world(100, 100)
        rect = grow_free_rect(world.truth, (5.05, 5.05), max_half_extent=1.0)
        self.assertLessEqual(rect.xmax - 5.05, 1.0 + 1e-9)
        self.assertLessEqual(5.05 - rect.xmin, 1.0 + 1e-9)

    def test_rect_is_free_and_holds_center(self):
        rng = np.random.default_rng(13)
        for _ in range(30):
            world = random_world(rng, 30, 30, density=0.2)
            grid = world.truth
            free = np.argwhere(grid.free_mask)
            center = grid.center_of(*free[rng.integers(len(free))])
            rect = grow_free_rect(grid, center)
            self.assertTrue(rect.contains(center))
            c0, r0 = grid.cell_of(rect.xmin + 0.05, rect.ymin + 0.05)[::-1]
            c1, r1 = grid.cell_of(rect.xmax - 0.05, rect.ymax - 0.05)[::-1]
            self.assertTrue(grid.free_mask[r0:r1 + 1, c0:c1 + 1].all())

    def test_center_in_obstacle(self):
        with self.assertRaises(ObstacleError):
            grow_free_rect(box_world(10, 10).truth, (0.05, 0.05))

    def test_previous_rect_is_finalized(self):
        """
        Ensure finalizing regrows the older rectangle and leaves the newest a single cell
        """
        world = box_world(30, 30)
        fht_map = empty_map()
        for position in ((1.05, 1.05), (2.05, 2.05)):
            fht_map.add_node(NodeKind.SUPPORT, position, cell_rect(world.truth, position))
        finalize_previous_rect(fht_map, world.truth)
        for got, want in zip(fht_map.node(0).free_rect.as_list(), (0.1, 0.1, 2.9, 2.9)):
            self.assertAlmostEqual(got, want)
        self.assertAlmostEqual(fht_map.node(1).free_rect.area, 0.01)


class RefineTests(SimpleTestCase):
    def ring_map(self, link_new=True):
        world = ring_world(60)
        fht_map = empty_map()
        for position in ((0.75, 0.75), (0.75, 5.25), (5.25, 5.25), (5.25, 0.75)):
            support_at(fht_map, position)
        fht_map.add_edge(0, 1)
        fht_map.add_edge(1, 2)
        fht_map.add_edge(2, 3)
        new = support_at(fht_map, (3.0, 0.75))
        if link_new:
            fht_map.add_edge(3, new.id)
        return world, fht_map, new

    def test_shortcut_around_the_ring(self):
        """
        Ensure a long detour in the graph gets a chain of nodes along the short way
        """
        world, fht_map, new = self.ring_map()
        added = refine_map(fht_map, world.truth, new, 1.5, th_s=1.0)
        self.assertGreater(added, 0)
        topo = nx.dijkstra_path_length(fht_map.to_networkx(), new.id, 0)
        self.assertLessEqual(topo, 1.5 * 2.25)
        for a, b in fht_map.sorted_edges():
            self.assertTrue(segment_in_free(world.truth, fht_map.node(a).position,
                                            fht_map.node(b).position, 0.1))

    def test_infinite_rho_leaves_connected_map(self):
        world, fht_map, new = self.ring_map()
        self.assertEqual(refine_map(fht_map, world.truth, new, math.inf, th_s=1.0), 0)
        self.assertEqual(len(fht_map), 5)

    def test_infinite_rho_repairs_disconnection(self):
        """
        Ensure refinement without shortcuts still joins a node with no route
        """
        world, fht_map, new = self.ring_map(link_new=False)
        refine_map(fht_map, world.truth, new, math.inf, th_s=1.0)
        self.assertTrue(fht_map.is_connected())


class ConnectivityTests(SimpleTestCase):
    def corner_map(self):
        world = corner_corridor()
        fht_map = empty_map()
        main_at(fht_map, (0.25, 0.25))
        return world, fht_map

    def assert_edges_in_free(self, fht_map, grid):
        for a, b in fht_map.sorted_edges():
            self.assertTrue(segment_in_free(grid, fht_map.node(a).position,
                                            fht_map.node(b).position, 0.1))

    def test_chain_stops_at_reused_target(self):
        """
        Ensure a chain whose next hop lands on the target ends there
        """
        world = box_world(40, 20)
        fht_map = empty_map()
        start = support_at(fht_map, (1.0, 1.0))
        target = support_at(fht_map, (2.0, 1.0))
        path = [(1.0 + 0.1 * k, 1.0) for k in range(11)]
        created = place_along_path(fht_map, world.truth, start, target, path, 0.8, 0.1,
                                   support_factory)
        self.assertEqual(created, 0)
        self.assertEqual(fht_map.sorted_edges(), [(0, 1)])

    def test_trail_joins_cut_off_node(self):
        """
        Ensure a node the grid cannot reach is joined back along the trail
        """
        world, fht_map = self.corner_map()
        cut_off = support_at(fht_map, (1.95, 1.85))
        created = bridge_along_trail(fht_map, world.truth, cut_off, corner_trail(), 3.0, 0.1)
        self.assertEqual(created, 1)
        self.assertEqual(fht_map.node(2).position, (1.95, 0.25))
        self.assertTrue(fht_map.is_connected())
        self.assert_edges_in_free(fht_map, world.truth)

    def test_build_step_keeps_map_connected(self):
        """
        Ensure a step that cuts a node off joins it again along the trail
        """
        world, fht_map = self.corner_map()
        created = build_step(BuilderState(), fht_map, Pose2(1.95, 1.85, 0), FLAT, SCAN,
                             world.truth, trail=corner_trail())
        self.assertEqual([n.kind for n in created], [NodeKind.SUPPORT, NodeKind.SUPPORT])
        self.assertTrue(fht_map.is_connected())
        self.assert_edges_in_free(fht_map, world.truth)

    def test_cut_off_node_is_retried(self):
        """
        Ensure a node left cut off by one step is joined by a later one
        """
        world, fht_map = self.corner_map()
        state = BuilderState(retry_every=0)
        pose = Pose2(1.95, 1.85, 0)
        build_step(state, fht_map, pose, FLAT, SCAN, world.truth)
        self.assertFalse(fht_map.is_connected())

        created = build_step(state, fht_map, pose, FLAT, SCAN, world.truth, trail=corner_trail())
        self.assertEqual(len(created), 1)
        self.assertTrue(fht_map.is_connected())

    def test_closed_wall_cannot_be_repaired(self):
        """
        Ensure repair creates nothing when no route exists
        """
        world = two_rooms()
        fht_map = empty_map()
        main_at(fht_map, (1.0, 1.5))
        support_at(fht_map, (4.0, 1.5))
        self.assertEqual(repair_connectivity(fht_map, world.truth, 3.0, 0.1), 0)
        self.assertEqual(len(fht_map), 2)
        self.assertFalse(fht_map.is_connected())


class BuildStepTests(SimpleTestCase):
    def test_nothing_triggers(self):
        world = two_rooms()
        fht_map = empty_map()
        main_at(fht_map, (1.0, 1.5))
        created = build_step(BuilderState(), fht_map, Pose2(1.2, 1.5, 0), FLAT, SCAN, world.truth)
        self.assertEqual(created, [])
        self.assertEqual(len(fht_map), 1)

    def test_main_node_suppresses_support_node(self):
        """
        Ensure a step that places a main node adds no support node beside it
        """
        world = box_world(100, 40)
        fht_map = empty_map()
        main_at(fht_map, (1.0, 2.0))
        created = build_step(BuilderState(), fht_map, Pose2(7.0, 2.0, 0), HALVES, SCAN, world.truth)
        self.assertEqual([n.kind for n in created], [NodeKind.MAIN])
        self.assertTrue(fht_map.has_edge(0, 1))

    def test_support_trigger_by_mode(self):
        for mode, kind in (("fht", NodeKind.SUPPORT), ("main_only", NodeKind.MAIN),
                           ("feature_only", NodeKind.MAIN)):
            world = two_rooms()
            fht_map = empty_map()
            main_at(fht_map, (2.5, 1.5))
            created = build_step(BuilderState(), fht_map, Pose2(3.5, 1.5, 0), FLAT, SCAN,
                                 world.truth, mode=mode)
            self.assertEqual([n.kind for n in created], [kind], mode)


class MapBuilderTests(SimpleTestCase):
    def build(self, mode):
        world = two_rooms(door=(10, 20))
        builder = MapBuilder(world, mode, descriptor=HistogramDescriptor(7.0, 32))
        result = explore(world, Pose2(1.0, 1.5, 0.0), ExploreConfig(budget=400), builder)
        return builder.finish(result.explored), result.explored

    def test_fht_map_is_connected(self):
        """
        Ensure a full build leaves every node reachable from node 0
        """
        fht_map, explored = self.build("fht")
        self.assertGreater(len(fht_map.main_nodes()), 0)
        self.assertTrue(fht_map.is_connected())
        for a, b in fht_map.sorted_edges():
            self.assertTrue(segment_in_free(explored, fht_map.node(a).position,
                                            fht_map.node(b).position, 0.1))
        for node in fht_map.nodes:
            self.assertTrue(node.free_rect.contains(node.position))

    def test_ablations_have_no_support_nodes(self):
        """
        Ensure main_only and feature_only maps hold main nodes only
        """
        for mode in ("main_only", "feature_only"):
            fht_map, _ = self.build(mode)
            self.assertEqual(fht_map.support_nodes(), [], mode)

    def test_unknown_mode(self):
        with self.assertRaises(ConfigurationError):
            MapBuilder(two_rooms(), "dense")
