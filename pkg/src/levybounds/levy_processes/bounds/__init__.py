"""Implicit-equation solvers and the bounds built on them"""

from .solvers import *
from .theorems import *
from .reports import *
