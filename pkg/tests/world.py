import math

import numpy as np
from django.test import SimpleTestCase

from topomapapi.exceptions import MotionError, ObstacleError, WorldParseError
from topomapapi.world import (CellState, HistogramDescriptor, OccupancyGrid, Pose2, Transform2,
                              astar, distance_field, integrate_scan, load_grid, load_world,
                              move_along, path_length, raycast_scan, save_grid, save_world,
                              segment_in_free, sense_descriptor, traversable_mask)
from topomapapi.world.gridsearch import cells_to_points, grid_path

from .scenes import box_world, random_world, two_rooms, world_from_rows


class GeometryTests(SimpleTestCase):
    def test_compose_with_inverse_is_identity(self):
        """
        Ensure T * inverse(T) is the identity for random transforms.
        """
        rng = np.random.default_rng(1)
        for _ in range(100):
            t = Transform2(*rng.uniform(-20, 20, 2), rng.uniform(-math.pi, math.pi))
            self.assertTrue((t @ t.inverse()).is_close(Transform2.identity(), 1e-9))
            self.assertTrue((t.inverse() @ t).is_close(Transform2.identity(), 1e-9))

    def test_composition_is_associative(self):
        """
        Ensure transform composition is associative
        """
        rng = np.random.default_rng(2)
        for _ in range(100):
            a, b, c = (Transform2(*rng.uniform(-5, 5, 2), rng.uniform(-4, 4)) for _ in range(3))
            self.assertTrue(((a @ b) @ c).is_close(a @ (b @ c), 1e-9))

    def test_angles_wrap_to_half_open_interval(self):
        self.assertAlmostEqual(Pose2(0, 0, -math.pi).theta, math.pi)
        self.assertAlmostEqual(Transform2(0, 0, math.radians(362)).theta, math.radians(2))


class WorldFileTests(SimpleTestCase):
    def test_all_free_room(self):
        """
        Ensure a 3x3 file of '.' loads as an all-free grid.
        """
        world = load_world("world 3 3 0.1\n...\n...\n...\n")
        self.assertEqual(world.truth.shape, (3, 3))
        self.assertEqual(world.truth.count(CellState.FREE), 9)

    def test_border_is_occupied(self):
        world = box_world(5, 4)
        self.assertEqual(world.truth.count(CellState.OCCUPIED), 14)
        self.assertEqual(world.truth.count(CellState.FREE), 6)
        self.assertEqual(world.texture[0, 0], 0.5)

    def test_round_trip_random_worlds(self):
        """
        Ensure load(save(w)) == w for randomized textured worlds.
        """
        rng = np.random.default_rng(3)
        alphabet = np.array(list(".#0123456789"))
        for _ in range(20):
            width, height = rng.integers(1, 25, 2)
            rows = ["".join(rng.choice(alphabet, width)) for _ in range(height)]
            world = world_from_rows(rows)
            self.assertEqual(load_world(save_world(world)), world)

    def test_texture_digits(self):
        world = load_world("world 3 1 0.5\n9.0\n")
        self.assertAlmostEqual(world.texture[0, 0], 1.0)
        self.assertAlmostEqual(world.texture[0, 2], 0.0)
        self.assertTrue(np.isnan(world.texture[0, 1]))

    def test_short_row_names_line(self):
        """
        Ensure a short row names its line in the error
        """
        with self.assertRaises(WorldParseError) as caught:
            load_world("world 3 2 0.1\n...\n..\n")
        self.assertEqual(caught.exception.line, 3)

    def test_unknown_character_names_column(self):
        with self.assertRaises(WorldParseError) as caught:
            load_world("world 3 1 0.1\n.x.\n")
        self.assertEqual((caught.exception.line, caught.exception.column), (2, 2))

    def test_missing_header(self):
        with self.assertRaises(WorldParseError):
            load_world("...\n")

    def test_explored_grid_round_trip(self):
        cells = np.array([[0, 1, 2], [2, 2, 0]], dtype=np.int8)
        grid = OccupancyGrid(3, 2, 0.1, cells=cells)
        self.assertEqual(load_grid(save_grid(grid)), grid)


class RaycastTests(SimpleTestCase):
    def test_open_space_has_no_returns(self):
        """
        Ensure beams that see nothing within max_range report no return.
        """
        world = box_world(200, 200)
        scan = raycast_scan(world, Pose2(10.05, 10.05, 0.3), 90, 7.0)
        self.assertEqual(len(scan), 90)
        self.assertFalse(scan.valid.any())

    def test_range_to_flat_wall(self):
        """
        Ensure a beam normal to a wall 2 m away reads 2 m.
        """
        world = box_world(100, 40)
        # the right wall occupies x in [9.9, 10.0]
        scan = raycast_scan(world, Pose2(7.9, 2.05, 0.0), 360, 7.0)
        self.assertAlmostEqual(scan.ranges[0], 2.0, delta=world.resolution)
        scan = raycast_scan(world, Pose2(7.9, 2.05, math.pi), 360, 7.0)
        self.assertAlmostEqual(scan.ranges[180], 2.0, delta=world.resolution)

    def test_ranges_are_deterministic(self):
        world = two_rooms()
        pose = Pose2(1.23, 1.57, 0.4)
        self.assertEqual(raycast_scan(world, pose), raycast_scan(world, pose))

    def test_ranges_stay_in_bounds(self):
        """
        Ensure every range lies within the sensor range
        """
        world = random_world(np.random.default_rng(4), 40, 40, 0.05)
        free = np.argwhere(world.truth.free_mask)
        for row, col in free[::37]:
            scan = raycast_scan(world, Pose2(*world.truth.center_of(row, col), 0.0), 64, 2.0)
            ranges = scan.ranges[scan.valid]
            self.assertTrue(((ranges > 0) & (ranges <= 2.0)).all())

    def test_pose_inside_obstacle(self):
        world = box_world(10, 10)
        with self.assertRaisesRegex(ObstacleError, "pose inside obstacle"):
            raycast_scan(world, Pose2(0.05, 0.05, 0.0))

    def test_noise_is_seeded(self):
        world = box_world(40, 40)
        pose = Pose2(2.0, 2.0, 0.0)
        a = raycast_scan(world, pose, 90, 7.0, 0.02, np.random.default_rng(5))
        b = raycast_scan(world, pose, 90, 7.0, 0.02, np.random.default_rng(5))
        self.assertEqual(a, b)
        self.assertNotEqual(a, raycast_scan(world, pose, 90, 7.0))


class DescriptorTests(SimpleTestCase):
    def test_unit_norm(self):
        world = two_rooms(door=(10, 20))
        rng = np.random.default_rng(6)
        free = np.argwhere(world.truth.free_mask)
        for row, col in free[rng.choice(len(free), 20, replace=False)]:
            d = sense_descriptor(world, world.truth.center_of(row, col), 7.0, 32)
            self.assertEqual(d.dim, 32)
            self.assertAlmostEqual(float(np.linalg.norm(d.values)), 1.0, places=6)

    def test_circular_wall_fills_one_range_bin(self):
        """
        Ensure a ring wall around the robot puts the range mass in one bin.
        """
        size = 101
        center = (5.05, 5.05)
        rows = []
        for r in range(size):
            line = []
            for c in range(size):
                d = math.hypot((c + 0.5) * 0.1 - center[0], (r + 0.5) * 0.1 - center[1])
                line.append("#" if 2.4 <= d < 2.6 else ".")
            rows.append("".join(line))
        world = world_from_rows(rows)
        values = sense_descriptor(world, center, 7.0, 32).values
        ranges = values[:16]
        self.assertEqual(int(np.argmax(ranges)), 5)
        self.assertEqual(int(np.count_nonzero(ranges > 1e-3)), 1)

    def test_source_is_bound_to_dimension(self):
        world = box_world(30, 30)
        source = HistogramDescriptor(7.0, 16)
        self.assertEqual(source(world, (1.5, 1.5)).dim, 16)
        with self.assertRaises(ValueError):
            sense_descriptor(world, (1.5, 1.5), 7.0, 7)

    def test_descriptor_in_obstacle(self):
        with self.assertRaises(ObstacleError):
            sense_descriptor(box_world(10, 10), (0.05, 0.05), 7.0, 8)


class MappingTests(SimpleTestCase):
    def test_open_space_scan_frees_a_disk(self):
        """
        Ensure one scan into open space frees a disk of radius max_range.
        """
        world = box_world(200, 200)
        pose = Pose2(10.05, 10.05, 0.0)
        explored = OccupancyGrid.unknown_like(world.truth)
        explored = integrate_scan(explored, pose, raycast_scan(world, pose, 720, 3.0))
        rows, cols = np.nonzero(explored.free_mask)
        centers = explored.centers_of(rows, cols)
        distance = np.hypot(centers[:, 0] - pose.x, centers[:, 1] - pose.y)
        self.assertLessEqual(distance.max(), 3.0 + 1.5 * explored.resolution)
        self.assertEqual(explored.count(CellState.OCCUPIED), 0)
        for angle in np.linspace(0, 2 * math.pi, 12, endpoint=False):
            self.assertTrue(explored.is_free(pose.x + 2.5 * math.cos(angle),
                                             pose.y + 2.5 * math.sin(angle)))

    def test_integration_is_idempotent(self):
        """
        Ensure integrating the same scan twice changes nothing
        """
        world = two_rooms(door=(10, 20))
        pose = Pose2(1.5, 1.5, 0.0)
        scan = raycast_scan(world, pose)
        once = integrate_scan(OccupancyGrid.unknown_like(world.truth), pose, scan)
        self.assertEqual(integrate_scan(once, pose, scan), once)

    def test_explored_free_is_truly_free(self):
        """
        Ensure no scan sequence frees a cell that is occupied in the world.
        """
        rng = np.random.default_rng(7)
        for _ in range(5):
            world = random_world(rng, 40, 40, 0.1)
            explored = OccupancyGrid.unknown_like(world.truth)
            free = np.argwhere(world.truth.free_mask)
            for row, col in free[rng.choice(len(free), 8, replace=False)]:
                pose = Pose2(*world.truth.center_of(row, col), rng.uniform(-3, 3))
                explored = integrate_scan(explored, pose, raycast_scan(world, pose, 180, 3.0))
            self.assertFalse((explored.free_mask & ~world.truth.free_mask).any())

    def test_segment_degenerate_and_blocked(self):
        world = two_rooms()
        self.assertTrue(segment_in_free(world.truth, (1.0, 1.0), (1.0, 1.0), 0.0))
        self.assertFalse(segment_in_free(world.truth, (1.0, 1.0), (5.0, 1.0), 0.0))
        self.assertTrue(segment_in_free(world.truth, (1.0, 1.0), (2.5, 2.0), 0.0))
        self.assertFalse(segment_in_free(world.truth, (1.0, 1.0), (2.85, 1.0), 0.2))

    def test_segment_agrees_with_supersampling(self):
        """
        Ensure a free verdict is never contradicted by dense sampling, and a
        blocked sample always means a blocked verdict.
        """
        rng = np.random.default_rng(8)
        for _ in range(10):
            world = random_world(rng, 30, 30, 0.1)
            grid = world.truth
            for _ in range(30):
                a, b = rng.uniform(0.1, 2.9, (2, 2))
                n = int(math.dist(a, b) / (grid.resolution / 4)) + 2
                samples = [a + t * (b - a) for t in np.linspace(0, 1, n)]
                sampled_free = all(grid.is_free(*p) for p in samples)
                verdict = segment_in_free(grid, a, b, 0.0)
                if verdict:
                    self.assertTrue(sampled_free)
                if not sampled_free:
                    self.assertFalse(verdict)

    def test_traversable_keeps_clearance(self):
        """
        Ensure traversable cells keep the clearance from obstacles
        """
        world = box_world(20, 20)
        mask = traversable_mask(world.truth, 0.1)
        # border plus two inflated rings
        self.assertFalse(mask[2, 5])
        self.assertTrue(mask[3, 5])


class MotionTests(SimpleTestCase):
    def setUp(self):
        self.world = two_rooms(door=(10, 20))

    def test_single_point_path(self):
        poses = move_along(self.world, [(1.0, 1.0)], 0.25)
        self.assertEqual(len(poses), 1)
        self.assertEqual(poses[0].position, (1.0, 1.0))

    def test_one_meter_in_quarter_steps(self):
        poses = move_along(self.world, [(1.0, 1.0), (2.0, 1.0)], 0.25)
        self.assertEqual(len(poses), 5)
        self.assertAlmostEqual(poses[-1].x, 2.0)
        self.assertTrue(all(abs(p.theta) < 1e-12 for p in poses))

    def test_arc_length_matches_polyline(self):
        rng = np.random.default_rng(9)
        world = box_world(100, 100)
        for _ in range(20):
            path = rng.uniform(0.5, 9.5, (rng.integers(2, 6), 2))
            poses = move_along(world, path, 0.25)
            traveled = sum(a.distance_to(b) for a, b in zip(poses, poses[1:]))
            self.assertLessEqual(traveled, path_length(path) + 1e-9)
            self.assertGreaterEqual(traveled, path_length(path) - 0.5 * len(path))

    def test_blocked_segment_names_index(self):
        """
        Ensure a blocked move names the segment and where it stopped
        """
        with self.assertRaises(MotionError) as caught:
            move_along(self.world, [(1.0, 1.0), (1.0, 2.0), (5.0, 2.5)], 0.25)
        self.assertEqual(caught.exception.index, 2)

    def test_start_in_obstacle(self):
        with self.assertRaises(MotionError) as caught:
            move_along(self.world, [(0.05, 0.05), (1.0, 1.0)], 0.25)
        self.assertEqual(caught.exception.index, 0)


class GridSearchTests(SimpleTestCase):
    def test_astar_matches_dijkstra(self):
        """
        Ensure A* path lengths equal the Dijkstra distance field.
        """
        rng = np.random.default_rng(10)
        for _ in range(10):
            world = random_world(rng, 25, 25, 0.2)
            mask = world.truth.free_mask
            free = np.argwhere(mask)
            start = tuple(free[rng.integers(len(free))])
            field, _ = distance_field(mask, 0.1, start)
            for goal in free[rng.choice(len(free), 10)]:
                goal = tuple(goal)
                cells = astar(mask, start, goal, 0.1)
                if not math.isfinite(field[goal]):
                    self.assertIsNone(cells)
                    continue
                length = path_length(cells_to_points(world.truth, cells))
                self.assertAlmostEqual(length, field[goal], places=9)

    def test_grid_path_goes_through_the_door(self):
        """
        Ensure the grid path passes through the door
        """
        world = two_rooms(door=(10, 20))
        path = grid_path(world.truth, (1.0, 1.0), (5.0, 1.0), 0.1)
        self.assertIsNotNone(path)
        self.assertEqual(path[0], (1.0, 1.0))
        self.assertEqual(path[-1], (5.0, 1.0))
        for a, b in zip(path, path[1:]):
            self.assertTrue(segment_in_free(world.truth, a, b, 0.0))

    def test_no_path_between_sealed_rooms(self):
        world = two_rooms()
        self.assertIsNone(grid_path(world.truth, (1.0, 1.0), (5.0, 1.0), 0.1))
