from ._qcap import *  # noqa: F401,F403
from ._qcap import Error, InputError, DomainError, ResourceLimitError  # noqa: F401
