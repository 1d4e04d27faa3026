"""Select the compiled kernels when available, else the pure-Python ones.

Set ``COXREP_PURE_PYTHON=1`` to force the fallback.
"""

import os

import numpy as np

BACKEND = "python"
_impl = None
if os.environ.get("COXREP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from coxrep import _fast as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = None
if _impl is None:
    from coxrep import _slow as _impl

normal_form = _impl.normal_form
word_length = _impl.word_length
is_left_descent = _impl.is_left_descent


def lengths_matrix(words, b, tol):
    return np.asarray(_impl.lengths_matrix(list(words), b, tol), dtype=np.int64)
