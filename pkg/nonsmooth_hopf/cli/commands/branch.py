"""
Branch continuation and bifurcation-diagram commands.

Both put the numerically located orbits next to the closed-form
prediction of the coefficient report.
"""

import math
import multiprocessing as mp
from functools import partial
from typing import TYPE_CHECKING, List, Optional, Sequence

import numpy as np
import pandas as pd

from ...coeffs.report import build_report
from ...core.types import PlanarSystem, System3D
from ...dynamics.bvp import continue_3d_branch, solve_3d_bvp, solve_nd_bvp
from ...dynamics.orbits import continue_branch, find_orbit
from ...predict.branches import Prediction, classify
from ...utils.decorators import validate_file_exists
from ...utils.exceptions import DynamicsError, PredictionError
from ..io import emit_frame, emit_json, sibling
from .coeffs import load_dynamic_system

if TYPE_CHECKING:
    from ...utils import Config, HopfLogger

DIAGRAM_COLUMNS = ["mu", "r0_numeric", "r0_predicted", "rel_err"]


def predict(system, config: "Config", logger: "HopfLogger") -> Optional[Prediction]:
    """Closed-form prediction, or None when the report cannot decide."""
    try:
        prediction = classify(build_report(system, config), config)
    except PredictionError as e:
        logger.warning(f"No closed-form prediction: {e.message}")
        return None
    logger.verdict("Prediction", prediction.kind.value)
    return prediction


def _predicted(prediction: Optional[Prediction], mus: Sequence[float]) -> List[float]:
    if prediction is None:
        return [math.nan] * len(mus)
    return [math.nan if (r := prediction.radius(mu)) is None else r for mu in mus]


def _rel_err(numeric: Sequence[float], predicted: Sequence[float]) -> List[float]:
    out = []
    for r, p in zip(numeric, predicted):
        ok = math.isfinite(r) and math.isfinite(p) and p != 0.0
        out.append(abs(r - p) / p if ok else math.nan)
    return out


def _records(frame: pd.DataFrame) -> list:
    return frame.astype(object).where(frame.notna(), None).to_dict(orient="records")


@validate_file_exists("input_path")
def run_branch(
    input_path: str,
    output: Optional[str],
    grid: Sequence[float],
    fmt: str,
    config: "Config",
    logger: "HopfLogger",
) -> None:
    system = load_dynamic_system(input_path)
    prediction = predict(system, config, logger)
    if isinstance(system, PlanarSystem):
        branch = continue_branch(system, grid, config)
    else:
        branch = continue_3d_branch(system, grid, config)
    for point in branch.points:
        logger.orbit(point.mu, point.r0, point.stability.value)

    frame = branch.to_frame()
    frame["r0_predicted"] = _predicted(prediction, frame["mu"])
    frame["rel_err"] = _rel_err(frame["r0"], frame["r0_predicted"])
    logger.verdict("Numerics", branch.kind.value)

    summary = {
        "prediction": None if prediction is None else prediction.to_dict(),
        "kind": branch.kind.value,
        "slope": branch.slope,
        "predicted_slope": prediction.r0_of_mu[0] if prediction is not None and prediction.r0_of_mu else None,
        "max_rel_err": float(np.nanmax(frame["rel_err"])) if frame["rel_err"].notna().any() else None,
        "failures": branch.failures,
    }
    if fmt == "json":
        emit_json({**summary, "points": _records(frame)}, output, config)
        return
    emit_frame(frame, output, config)
    target = sibling(output, ".prediction.json")
    if target is not None:
        emit_json(summary, target, config)


def diagram_point(system, mu: float, config: "Config") -> float:
    """Orbit radius at ``mu`` or NaN when none is found."""
    try:
        if isinstance(system, PlanarSystem):
            orbit = find_orbit(system, mu, config=config)
            return math.nan if orbit is None else orbit.r0
        solve = solve_3d_bvp if isinstance(system, System3D) else solve_nd_bvp
        orbits = solve(system, mu, config)
        return orbits[0].r0 if orbits else math.nan
    except DynamicsError:
        return math.nan


@validate_file_exists("input_path")
def run_diagram(
    input_path: str,
    output: Optional[str],
    grid: Sequence[float],
    workers: int,
    config: "Config",
    logger: "HopfLogger",
) -> None:
    system = load_dynamic_system(input_path)
    prediction = predict(system, config, logger)
    point = partial(diagram_point, system, config=config)
    if workers > 1:
        with mp.Pool(processes=min(workers, len(grid), mp.cpu_count())) as pool:
            numeric = pool.map(point, grid)
    else:
        numeric = [point(mu) for mu in grid]
    predicted = _predicted(prediction, grid)
    frame = pd.DataFrame(
        {
            "mu": list(grid),
            "r0_numeric": numeric,
            "r0_predicted": predicted,
            "rel_err": _rel_err(numeric, predicted),
        },
        columns=DIAGRAM_COLUMNS,
    )
    logger.info(f"Diagram: {int(np.isfinite(frame['r0_numeric']).sum())}/{len(grid)} parameter values carry an orbit")
    emit_frame(frame, output, config)
