from .frontier import Frontier, detect_frontiers, frontier_utility, frontier_goal
from .explorer import ExploreConfig, ExploreResult, explore, select_frontier
