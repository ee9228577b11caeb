from .geometry import Pose2, Transform2, wrap_angle
from .grid import CellState, OccupancyGrid
from .worldfile import World, load_world, save_world, load_grid, save_grid, load_world_file
from .raycast import NO_RETURN, LaserScan, beam_angles, raycast_scan
from .descriptor import Descriptor, HistogramDescriptor, sense_descriptor, descriptor_source
from .mapping import integrate_scan, segment_in_free, traversable_mask, inflation_cells
from .motion import move_along
from .gridsearch import (astar, distance_field, grid_graph, grid_path, navigable_mask,
                         path_from_predecessors, path_length, shorten_path)
