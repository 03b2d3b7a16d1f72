from sheafbetti.models.gv_table import GVTable, genus
from sheafbetti.models.omega import OmegaPoly, OmegaHat
from sheafbetti.models.report import TruncatedCheckReport
from sheafbetti.models.refined import HNType, StackSeries, RefinedPolynomial
