"""levybounds: median and concentration bounds for Lipschitz functions of Levy processes"""

from .exceptions import *
from .levy_processes import *
