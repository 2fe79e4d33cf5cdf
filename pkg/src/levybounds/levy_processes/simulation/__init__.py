"""Fixed-time sampling of Levy processes"""

from .rng_streams import *
from .samplers import *
from .sample_io import *
