from .storedmap import StoredMap
from .experimentreport import ExperimentReport
