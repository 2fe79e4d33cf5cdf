"""Monte Carlo verification of the bounds"""

from .lipschitz import *
from .statistics import *
from .harness import *
from .suites import *
