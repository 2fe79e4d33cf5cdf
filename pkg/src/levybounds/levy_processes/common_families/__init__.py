"""Levy families with closed-form scale functions and bounds."""

from .stable import *
from .truncated_stable import *
from .compound_poisson import *
