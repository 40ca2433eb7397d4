"""Python bindings for the nsfv solver."""

from ._core import *  # noqa: F401,F403
from ._core import Error, ConfigError, ConvergenceFailure  # noqa: F401
