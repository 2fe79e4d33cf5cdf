"""Levy measures, their scale functions, bounds, sampling and verification"""

from .radial_parts import *
from .levy_measures import *
from .measure_files import *

from .bounds import *
from .common_families import *
from .simulation import *
from .verification import *
