from ._drs import *  # noqa: F401,F403
from ._drs import run_cli  # noqa: F401
