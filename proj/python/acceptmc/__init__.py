"""Monte-Carlo computation of near-minimal capital and trading strategies
under scenario-based convex risk measures.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports it and adds small JSON conveniences.
"""

import json as _json

try:
    from ._core import (  # type: ignore[attr-defined]
        __version__,
        deviation_bound,
        evaluate,
        halfspace_vc_dim,
        minimal_kappa,
        oracle_check,
        plan,
        run,
        sauer_bound,
    )
except ImportError:  # build-tree layout: extension sits next to the package
    from _core import (  # type: ignore[no-redef]
        __version__,
        deviation_bound,
        evaluate,
        halfspace_vc_dim,
        minimal_kappa,
        oracle_check,
        plan,
        run,
        sauer_bound,
    )

__all__ = [
    "__version__",
    "deviation_bound",
    "evaluate",
    "halfspace_vc_dim",
    "minimal_kappa",
    "oracle_check",
    "plan",
    "plan_dict",
    "run",
    "run_dict",
    "sauer_bound",
]


def plan_dict(config):
    """plan() for a config dict, returning the report as a dict."""
    return _json.loads(plan(_json.dumps(config)))


def run_dict(config, workers=1):
    """run() for a config dict, returning the report as a dict."""
    return _json.loads(run(_json.dumps(config), workers))
