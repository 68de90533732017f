from .decompose import *  # noqa
from .embed import *  # noqa
from .densify import *  # noqa
from .standardize import *  # noqa
