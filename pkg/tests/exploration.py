import numpy as np
from django.test import SimpleTestCase

from topomapapi.exceptions import ObstacleError
from topomapapi.exploration import (ExploreConfig, detect_frontiers, explore, frontier_utility,
                                    select_frontier)
from topomapapi.world import CellState, OccupancyGrid, Pose2, integrate_scan, raycast_scan

from .scenes import box_world, random_world, split_grid, two_rooms


def grid_of(cells, resolution=0.1):
    cells = np.asarray(cells, dtype=np.int8)
    return OccupancyGrid(cells.shape[1], cells.shape[0], resolution, cells=cells)


def first_scan(world, position):
    pose = Pose2(position[0], position[1], 0.0)
    return integrate_scan(OccupancyGrid.unknown_like(world.truth), pose,
                          raycast_scan(world, pose))


class FrontierTests(SimpleTestCase):
    def test_single_frontier_on_boundary_column(self):
        """
        Ensure a free block beside unknown space yields one frontier along its edge
        """
        frontiers = detect_frontiers(split_grid())
        self.assertEqual(len(frontiers), 1)
        cells = {tuple(c) for c in frontiers[0].cells}
        self.assertEqual(cells, {(r, 9) for r in range(10)})
        self.assertAlmostEqual(frontiers[0].centroid[0], 0.95)
        self.assertAlmostEqual(frontiers[0].centroid[1], 0.5)

    def test_fully_explored_grid_has_no_frontier(self):
        world = box_world(20, 20)
        self.assertEqual(detect_frontiers(world.truth.copy()), [])

    def test_frontier_cells_match_brute_force(self):
        """
        Ensure frontier cells are exactly the free cells next to unknown ones
        """
        rng = np.random.default_rng(4)
        for _ in range(20):
            states = rng.choice([CellState.FREE, CellState.OCCUPIED, CellState.UNKNOWN],
                                size=(15, 18), p=[0.5, 0.2, 0.3])
            grid = grid_of(states)
            found = set()
            for frontier in detect_frontiers(grid, min_cells=1):
                found |= {tuple(int(v) for v in c) for c in frontier.cells}

            expected = set()
            for r in range(15):
                for c in range(18):
                    if states[r, c] != CellState.FREE:
                        continue
                    for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        rr, cc = r + dr, c + dc
                        if 0 <= rr < 15 and 0 <= cc < 18 and states[rr, cc] == CellState.UNKNOWN:
                            expected.add((r, c))
                            break
            self.assertEqual(found, expected)

    def test_frontiers_are_ordered_by_centroid(self):
        rng = np.random.default_rng(5)
        states = rng.choice([CellState.FREE, CellState.UNKNOWN], size=(30, 30), p=[0.6, 0.4])
        centroids = [f.centroid_cell for f in detect_frontiers(grid_of(states), min_cells=1)]
        self.assertEqual(centroids, sorted(centroids))

    def test_unreachable_frontier_has_zero_utility(self):
        """
        Ensure a frontier with no grid path scores nothing
        """
        states = np.full((10, 20), CellState.UNKNOWN, dtype=np.int8)
        states[:, :9] = CellState.FREE
        states[:, 9] = CellState.OCCUPIED
        states[:, 10:15] = CellState.FREE
        grid = grid_of(states)
        frontiers = detect_frontiers(grid)
        self.assertEqual(len(frontiers), 1)
        self.assertEqual(frontier_utility(frontiers[0], Pose2(0.25, 0.55, 0.0), grid), 0.0)

    def test_utility_falls_with_path_cost(self):
        """
        Ensure doubling the distance to the same frontier halves its utility
        """
        states = np.full((21, 100), CellState.FREE, dtype=np.int8)
        states[:, 90:] = CellState.UNKNOWN
        grid = grid_of(states)
        frontier = detect_frontiers(grid)[0]
        near = frontier_utility(frontier, Pose2(6.55, 1.05, 0.0), grid)
        far = frontier_utility(frontier, Pose2(4.55, 1.05, 0.0), grid)
        self.assertGreater(far, 0.0)
        self.assertAlmostEqual(near / far, 2.0, places=6)


class SelectFrontierTests(SimpleTestCase):
    def test_selection_is_utility_argmax(self):
        rng = np.random.default_rng(6)
        checked = 0
        for _ in range(15):
            world = random_world(rng, 40, 40, density=0.08)
            free = np.argwhere(world.truth.free_mask)
            row, col = free[rng.integers(len(free))]
            position = world.truth.center_of(row, col)
            explored = first_scan(world, position)
            pose = Pose2(position[0], position[1], 0.0)
            frontiers = detect_frontiers(explored)
            utilities = [frontier_utility(f, pose, explored, 0.1) for f in frontiers]
            chosen = select_frontier(explored, pose, frontiers, 0.1)
            if not utilities or max(utilities) == 0.0:
                self.assertIsNone(chosen)
                continue
            self.assertIs(chosen[0], frontiers[int(np.argmax(utilities))])
            checked += 1
        self.assertGreater(checked, 0)

    def test_path_ends_at_goal_cell(self):
        grid = split_grid(40, 20, 20)
        pose = Pose2(0.55, 1.05, 0.0)
        frontier, cell, cells = select_frontier(grid, pose, detect_frontiers(grid), 0.1)
        self.assertEqual(cells[0], grid.cell_of(pose.x, pose.y))
        self.assertEqual(cells[-1], cell)

    def test_visited_goals_are_skipped(self):
        """
        Ensure a goal already reached is not picked again
        """
        grid = split_grid(40, 20, 20)
        pose = Pose2(0.55, 1.05, 0.0)
        _, cell, _ = select_frontier(grid, pose, detect_frontiers(grid), 0.1)
        visited = [grid.center_of(*cell)]
        self.assertIsNone(select_frontier(grid, pose, detect_frontiers(grid), 0.1, visited))


class ExploreTests(SimpleTestCase):
    def test_closed_room_seen_from_start(self):
        world = box_world(30, 30)
        result = explore(world, Pose2(1.5, 1.5, 0.0), ExploreConfig(budget=200))
        self.assertTrue(result.finished)
        self.assertFalse(result.partial)
        self.assertGreaterEqual(result.coverage(world.truth), 0.99)

    def test_two_rooms_through_door(self):
        """
        Ensure exploration crosses the door and covers both rooms
        """
        world = two_rooms(door=(10, 20))
        result = explore(world, Pose2(1.0, 1.5, 0.0), ExploreConfig(budget=400))
        self.assertTrue(result.finished)
        self.assertGreaterEqual(result.coverage(world.truth), 0.95)
        for pose in result.trajectory:
            self.assertEqual(world.truth.state_at(pose.x, pose.y), CellState.FREE)

    def test_budget_stops_exploration(self):
        """
        Ensure exploration stops at the step budget
        """
        world = two_rooms(door=(10, 20))
        result = explore(world, Pose2(1.0, 1.5, 0.0), ExploreConfig(budget=2))
        self.assertTrue(result.partial)
        self.assertLessEqual(result.steps, 2)
        self.assertEqual(len(result.trajectory), result.steps + 1)

    def test_start_inside_obstacle(self):
        with self.assertRaises(ObstacleError):
            explore(two_rooms(), Pose2(3.05, 1.5, 0.0))

    def test_builder_sees_every_pose(self):
        """
        Ensure the construction callback runs once per pose
        """
        seen = []
        world = two_rooms(door=(10, 20))
        result = explore(world, Pose2(1.0, 1.5, 0.0), ExploreConfig(budget=60),
                         lambda pose, scan, grid: seen.append(pose))
        self.assertEqual(seen, result.trajectory)

    def test_same_seed_same_trajectory(self):
        """
        Ensure the same seed drives the same trajectory
        """
        world = two_rooms(door=(10, 20))
        config = ExploreConfig(budget=80, seed=9, noise_std=0.01)
        first = explore(world, Pose2(1.0, 1.5, 0.0), config)
        second = explore(world, Pose2(1.0, 1.5, 0.0), config)
        self.assertEqual([p.position for p in first.trajectory],
                         [p.position for p in second.trajectory])
