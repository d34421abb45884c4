"""Python interface to the hcdr C++ library."""

from ._core import *  # noqa: F401,F403
from ._core import HcdrError  # noqa: F401
