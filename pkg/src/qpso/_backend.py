"""Kernel backend selection.

The compiled extension (``qpso._core``) is used for built-in problems
when it imports cleanly; otherwise runs fall back to the pure-Python
reference kernel.  Both produce identical records, so the choice is
purely about speed.  Set ``QPSO_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .optimizers import AlgorithmConfig, RunRecord
from .problems import ProblemSpec

_ALGO_IDS = {"pso": 0, "qpso": 1, "qpso-mo": 2, "qpso-cd": 3}
_PENALTY_IDS = {"constant": 0, "sqrt": 1, "linear": 2}

_core_module = None
_core_checked = False


def core():
    """The compiled extension module, or None if unavailable."""
    global _core_module, _core_checked
    if not _core_checked:
        _core_checked = True
        try:
            from . import _core
            _core_module = _core
        except ImportError:
            _core_module = None
    return _core_module


def backend_name() -> str:
    """Which kernel new runs will use: "compiled" or "python"."""
    if os.environ.get("QPSO_PURE_PYTHON"):
        return "python"
    return "compiled" if core() is not None else "python"


def run_compiled(problem: ProblemSpec, cfg: AlgorithmConfig) -> RunRecord:
    """Dispatch a resolved config to the compiled kernel."""
    mod = core()
    init_lo = np.asarray(problem.init_lo, dtype=float)
    init_hi = np.asarray(problem.init_hi, dtype=float)
    if problem.constrained:
        box_lo = np.asarray(problem.constraints.box_lo, dtype=float)
        box_hi = np.asarray(problem.constraints.box_hi, dtype=float)
    else:
        box_lo = init_lo
        box_hi = init_hi
    has_target = cfg.target is not None
    target = cfg.target if has_target else math.nan
    trajectory, final_pos, final_value, evals_total, hit = mod.run_kernel(
        _ALGO_IDS[cfg.algorithm], problem.kernel_id, problem.dimension,
        cfg.population, cfg.iterations,
        init_lo, init_hi, box_lo, box_hi, problem.constrained,
        cfg.c1, cfg.c2, cfg.alpha_start, cfg.alpha_end,
        cfg.pr, cfg.selection_size, cfg.natural_selection,
        cfg.chi, _PENALTY_IDS[cfg.penalty.kind], cfg.penalty.coefficient,
        has_target, target, cfg.stop_at_target, cfg.seed,
    )
    return RunRecord(
        trajectory=trajectory,
        final_value=float(final_value),
        final_position=final_pos,
        evals_total=int(evals_total),
        evals_to_region=None if hit < 0 else int(hit),
        seed=cfg.seed,
    )
