"""Kernel acceleration shim.

Hot kernels are written twice: a scalar loop compiled with numba's ``njit``
and a vectorized numpy fallback.  Selection happens once at import time:

* ``IMCFLOW_KERNELS=numpy``  force the numpy/interpreted path
* ``IMCFLOW_KERNELS=numba``  require numba (raises if it cannot be imported)
* unset                      use numba when importable, else fall back

``USING_NUMBA`` records the decision so tests and the benchmark script can
assert which path actually ran.
"""

import functools
import os

_choice = os.environ.get("IMCFLOW_KERNELS", "").strip().lower()

NUMBA_OK = False
if _choice != "numpy":
    try:
        from numba import njit  # noqa: F401

        NUMBA_OK = True
    except ImportError:
        if _choice == "numba":
            raise

USING_NUMBA = NUMBA_OK

if not NUMBA_OK:

    def njit(*args, **kwargs):
        """Identity decorator standing in for numba.njit."""

        def decorator(func):
            @functools.wraps(func)
            def wrapper(*a, **kw):
                return func(*a, **kw)

            return wrapper

        if len(args) == 1 and callable(args[0]) and not kwargs:
            return decorator(args[0])
        return decorator
