"""Kernel selection: compiled extension when importable, else pure Python.

Set ``QHPP_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("QHPP_PURE_PYTHON"):
    from qhpp.hj import _pykernels as impl
else:
    try:
        from qhpp.hj import _ckernels as impl
    except ImportError:
        from qhpp.hj import _pykernels as impl

BACKEND = "compiled" if impl.__name__.endswith("_ckernels") else "python"

continuant = impl.continuant
prefix_suffix = impl.prefix_suffix
chain_numbers = impl.chain_numbers
identity_sweep = impl.identity_sweep
