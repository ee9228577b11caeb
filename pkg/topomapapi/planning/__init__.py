from .topo import shortest_topo, all_pairs_topo
from .terminals import eq11_access_cost, select_terminals
from .planner import PlanResult, plan
from .executor import ExecutionResult, execute_with_skip, skip_route
from .utilization import UtilizeResult, utilize
