"""Self-similar renormalization-group forecasting of daily series."""

from ._rgforecast import *  # noqa: F401,F403
from ._rgforecast import __version__  # noqa: F401
