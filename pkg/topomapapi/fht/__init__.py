from .node import MapNode, NodeKind, Rect
from .graph import FhtMap, MapMeta
from .capability import entropy, reloc_capability
from .rect import grow_free_rect, finalize_previous_rect, cell_rect
from .refine import (bridge_along_trail, bridge_to_graph, detached_components, place_along_path,
                     refine_map, repair_connectivity)
from .builder import (MODES, BuilderState, FanOut, MapBuilder, add_edges, build_step,
                      support_trigger, update_main_node, update_support_node)
from .codec import serialize, deserialize, storage_bytes, structurally_equal
