"""Kernel backend selection: compiled Cython extension with pure fallback.

Set FLUIDPRICING_KERNEL=pure or =compiled to force a backend; the default
prefers the compiled extension and silently falls back to numpy when the
extension was not built.
"""

import os

from . import pure

_forced = os.environ.get("FLUIDPRICING_KERNEL", "").strip().lower()

_fast = None
if _forced != "pure":
    try:
        from . import _fast
    except ImportError:
        _fast = None
        if _forced == "compiled":
            raise ImportError(
                "FLUIDPRICING_KERNEL=compiled but the extension is not built; "
                "run `pip install -e . --no-build-isolation`"
            )

if _fast is not None:
    solve_qp = _fast.solve_qp
    BACKEND = "compiled"
else:
    solve_qp = pure.solve_qp
    BACKEND = "pure"

STATUS_OPTIMAL = pure.STATUS_OPTIMAL
STATUS_INFEASIBLE = pure.STATUS_INFEASIBLE


def backend_name() -> str:
    return BACKEND


def available_backends() -> dict:
    """Name -> solve_qp callable for every importable backend."""
    out = {"pure": pure.solve_qp}
    if _fast is not None:
        out["compiled"] = _fast.solve_qp
    return out
