"""Errors raised by the mapping, relocalization and planning code"""


class TopoMapError(Exception):
    """Base class for every domain error in topomapapi"""


class WorldParseError(TopoMapError, ValueError):
    """A world or grid file does not follow the file format"""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(f"{message}{where}")


class ObstacleError(TopoMapError, ValueError):
    """A pose or point lies inside an obstacle or outside the grid"""


class MotionError(TopoMapError):
    """Robot motion left free space"""

    def __init__(self, message, index=None, location=None):
        self.index = index
        self.location = location
        super().__init__(message)


class ConfigurationError(TopoMapError, ValueError):
    pass


class MapFormatError(TopoMapError, ValueError):
    """Serialized map is truncated, malformed or has the wrong version"""


class UnknownNodeError(TopoMapError, LookupError):
    """No node with the requested id; the message prints unquoted"""


class NodeKindError(TopoMapError, ValueError):
    pass


class InsufficientOverlapError(TopoMapError):
    pass


class AlignmentError(TopoMapError):
    pass


class PlanningError(TopoMapError):
    pass


class RouteBlockedError(PlanningError):
    """A waypoint of the route cannot be reached over the explored grid"""

    def __init__(self, message, waypoint=None, location=None):
        self.waypoint = waypoint
        self.location = location
        super().__init__(message)
