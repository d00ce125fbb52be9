from ._fedcodec import *  # noqa: F401,F403
from ._fedcodec import __doc__  # noqa: F401
