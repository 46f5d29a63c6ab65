"""Backend selection for the hot kernels.

The compiled extension :mod:`fuscat._kernels` is used when it can be imported; otherwise
(or when the environment variable ``FUSCAT_PURE`` is set to a non-empty value other than
``0``) the pure-Python module :mod:`fuscat._kernels_py` is used. Both expose the same
functions and are tested against each other.
"""
import os

import numpy as np

from . import _kernels_py

DENSE_MAX_RANK = 12

try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

_force_pure = os.environ.get('FUSCAT_PURE', '') not in ('', '0')
BACKEND = 'compiled' if (_compiled is not None and not _force_pure) else 'python'


def available_backends() -> list:
    return ['python'] + (['compiled'] if _compiled is not None else [])


def _module(backend):
    backend = backend or BACKEND
    if backend == 'compiled':
        if _compiled is None:
            raise ImportError('compiled kernels are not built')
        return _compiled
    if backend == 'python':
        return _kernels_py
    raise ValueError(f'unknown backend {backend!r}')


def pentagon(F6, N, backend=None):
    F6 = np.ascontiguousarray(F6, dtype=complex)
    N = np.ascontiguousarray(N, dtype=np.uint8)
    return _module(backend).pentagon(F6, N)
