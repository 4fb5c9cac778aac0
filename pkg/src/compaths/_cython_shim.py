"""Stand-in for the ``cython`` module when Cython is not installed."""

compiled = False
int = int
long = int
bint = bool


def _identity(obj):
    return obj


cclass = cfunc = ccall = inline = _identity
