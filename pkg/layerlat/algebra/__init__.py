from .ogroup import *  # noqa
from .bunch import *  # noqa
from .chain import *  # noqa
