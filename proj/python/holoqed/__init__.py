from ._core import *  # noqa: F401,F403
from ._core import HoloqedError, __version__  # noqa: F401
