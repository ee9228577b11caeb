from .storedmap import Maps
from .report import Reports
