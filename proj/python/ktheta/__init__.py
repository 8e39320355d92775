from ._ktheta import *  # noqa: F401,F403
from ._ktheta import __doc__  # noqa: F401
