"""Exact formal-series engine for embedding diffeomorphism germs in flows."""

__version__ = "1.0.0"

from .coeff import *  # noqa: F401,F403
from .expr import *  # noqa: F401,F403
from .flow import *  # noqa: F401,F403
from .linearize import *  # noqa: F401,F403
from .matrix import *  # noqa: F401,F403
from .series import *  # noqa: F401,F403
