from .world import (GeometryTests, WorldFileTests, RaycastTests, DescriptorTests, MappingTests,
                    MotionTests, GridSearchTests)
from .exploration import FrontierTests, SelectFrontierTests, ExploreTests
from .construction import (EntropyTests, NodeTests, MainNodeTests, SupportNodeTests, EdgeTests,
                           RectTests, RefineTests, ConnectivityTests, BuildStepTests,
                           MapBuilderTests)
from .codec import CodecTests
from .relocalization import (IcpTests, EstimationTests, RobustTests, MatchingTests,
                             RelocalizeTests, WalkTests)
from .planning import TopoTests, TerminalTests, PlanTests, ExecutionTests, UtilizeTests
from .metrics import (RelocMetricTests, PathMetricTests, StorageBaselineTests, ReportTests,
                      RenderTests, ExperimentTests)
from .maps import MapTests, ExperimentReportTests
from .commands import ConfigTests, CommandTests
from .acceptance import (MuseumRunTests, OfficeRunTests, LoopCorridorTests, SigmaTests,
                         BundledConnectivityTests, StructuralTests)
