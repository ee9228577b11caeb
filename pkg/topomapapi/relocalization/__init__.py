from .matching import match_descriptor
from .icp import global_icp
from .estimation import Estimation, make_estimation
from .robust import reject_outliers, optimize_transform, circular_median, consensus
from .relocalizer import RelocConfig, RelocResult, Relocalizer, relocalize
from .walk import random_walk, random_offset, random_start
