"""HTTP service exposing rollout, bound, oracle, and sweep computations.

Thin wrapper over the library; every endpoint is a pure computation, so the
app is safe to serve with multiple workers.  Launch with ``hjbgap serve``.
"""

from __future__ import annotations

import math
from typing import List, Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .bounds import NormGridSpec, performance_bound
from .controller import Strategy, make_law
from .oracle import DpGrid, dp_query, dp_solve
from .problem import reachable_radius
from .registry import available_problems, get_suite
from .simulate import rollout_closed_loop
from .sweep import resolve_worst_case_value, run_sweep

app = FastAPI(title="hjbgap",
              description="Feedback controllers from approximate value "
                          "functions, with suboptimality bounds")


def _suite_or_404(name: str):
    try:
        return get_suite(name)
    except KeyError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc


class ProblemInfo(BaseModel):
    name: str
    state_dim: int
    input_dim: int
    horizon: float
    beta_f: float
    vf_families: List[str]
    default_x0: List[float]


class RolloutRequest(BaseModel):
    problem: str
    vf: str = "vstar"
    eps: float = 1.0
    x0: Optional[List[float]] = None
    steps: int = Field(default=10_000, ge=1, le=1_000_000)
    argmin: Optional[str] = None
    argmin_grid: Optional[int] = Field(default=None, ge=2)


class RolloutResponse(BaseModel):
    total_cost: float
    loss: float
    vstar_at_origin_point: float
    terminal_state: List[float]
    max_state_norm: float
    gronwall_radius: float


class BoundRequest(BaseModel):
    problem: str
    vf: str
    eps: float = 1.0
    x0: Optional[List[float]] = None
    grid_x: int = Field(default=4001, ge=1)
    grid_t: int = Field(default=5, ge=1)
    include_worst_case: bool = True


class BoundResponse(BaseModel):
    R: float
    C: float
    sobolev_norm_estimate: float
    sobolev_bound: float
    worst_case_gap: Optional[float]
    final_bound: float
    warnings: List[str]


class OracleRequest(BaseModel):
    problem: str
    mode: str = "inf"
    x0: float
    nx: int = Field(default=2001, ge=2)
    nt: int = Field(default=2001, ge=2)


class OracleResponse(BaseModel):
    value: float
    analytic: Optional[float]
    abs_error: Optional[float]


class SweepRequest(BaseModel):
    problem: str
    family: str
    eps_list: Optional[List[float]] = None
    x0: Optional[List[float]] = None
    steps: int = Field(default=10_000, ge=1, le=1_000_000)


class SweepRecordModel(BaseModel):
    eps: float
    loss_numeric: float
    bound_formula: float
    bound_grid: float
    norm_estimate: float
    steps: int
    runtime_ms: float
    error: Optional[str] = None


class SweepResponse(BaseModel):
    records: List[SweepRecordModel]
    sound: bool


@app.get("/problems", response_model=List[ProblemInfo])
def list_problems():
    infos = []
    for name in available_problems():
        suite = get_suite(name)
        infos.append(ProblemInfo(
            name=name,
            state_dim=suite.problem.n,
            input_dim=suite.problem.m,
            horizon=suite.problem.horizon,
            beta_f=suite.problem.constants.beta_f,
            vf_families=sorted(suite.candidates),
            default_x0=suite.default_x0.tolist(),
        ))
    return infos


@app.post("/rollout", response_model=RolloutResponse)
def rollout(req: RolloutRequest):
    suite = _suite_or_404(req.problem)
    x0 = np.asarray(req.x0 if req.x0 is not None else suite.default_x0,
                    dtype=float)
    try:
        J = suite.candidate(req.vf, req.eps)
        strategy = Strategy(req.argmin) if req.argmin else None
        law = make_law(suite.problem, J, strategy=strategy,
                       grid_points_per_axis=req.argmin_grid)
        result = rollout_closed_loop(suite.problem, law, x0, req.steps,
                                     vstar_value=suite.vstar.value_at(x0, 0.0))
    except KeyError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc
    return RolloutResponse(
        total_cost=result.total_cost,
        loss=result.loss,
        vstar_at_origin_point=result.vstar_at_origin_point,
        terminal_state=result.trajectory.states[-1].tolist(),
        max_state_norm=result.trajectory.max_state_norm,
        gronwall_radius=reachable_radius(x0, suite.problem.constants.beta_f,
                                         suite.problem.horizon),
    )


@app.post("/bound", response_model=BoundResponse)
def bound(req: BoundRequest):
    suite = _suite_or_404(req.problem)
    x0 = np.asarray(req.x0 if req.x0 is not None else suite.default_x0,
                    dtype=float)
    try:
        J = suite.candidate(req.vf, req.eps)
    except KeyError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc
    worst = (resolve_worst_case_value(suite, x0)
             if req.include_worst_case else None)
    report = performance_bound(
        suite.problem, J, suite.vstar, x0,
        grid=NormGridSpec(state_points_per_axis=req.grid_x,
                          time_points=req.grid_t),
        worst_case_value=worst)
    return BoundResponse(
        R=report.R, C=report.C,
        sobolev_norm_estimate=report.sobolev_norm_estimate,
        sobolev_bound=report.sobolev_bound,
        worst_case_gap=report.worst_case_gap,
        final_bound=report.final_bound,
        warnings=report.warnings,
    )


@app.post("/oracle", response_model=OracleResponse)
def oracle(req: OracleRequest):
    suite = _suite_or_404(req.problem)
    if req.mode not in ("inf", "sup"):
        raise HTTPException(status_code=422, detail="mode must be inf or sup")
    R = reachable_radius([req.x0], suite.problem.constants.beta_f,
                         suite.problem.horizon)
    half = max(1.0, 1.1 * R)
    grid = DpGrid(x_min=-half, x_max=half, nx=req.nx, nt=req.nt, mode=req.mode)
    dp_solve(suite.problem, grid)
    value = dp_query(grid, req.x0, 0.0)
    analytic = None
    if req.mode == "inf":
        analytic = suite.vstar.value_at(np.array([req.x0]), 0.0)
    elif suite.worst_case_vf is not None:
        analytic = suite.worst_case_vf.value_at(np.array([req.x0]), 0.0)
    return OracleResponse(
        value=value,
        analytic=analytic,
        abs_error=None if analytic is None else abs(value - analytic),
    )


@app.post("/sweep", response_model=SweepResponse)
def sweep(req: SweepRequest):
    suite = _suite_or_404(req.problem)
    eps_list = req.eps_list or suite.default_eps.get(req.family)
    if not eps_list:
        raise HTTPException(status_code=422,
                            detail=f"no eps list for family {req.family!r}")
    if req.family not in suite.candidates:
        raise HTTPException(status_code=404,
                            detail=f"unknown family {req.family!r}")
    records = run_sweep(suite, req.family, eps_list, x0=req.x0,
                        steps=req.steps)
    models = [SweepRecordModel(
        eps=r.eps, loss_numeric=_json_float(r.loss_numeric),
        bound_formula=_json_float(r.bound_formula),
        bound_grid=_json_float(r.bound_grid),
        norm_estimate=_json_float(r.norm_estimate),
        steps=r.steps, runtime_ms=r.runtime_ms, error=r.error)
        for r in records]
    from .sweep import soundness_violations
    return SweepResponse(records=models,
                         sound=not soundness_violations(records))


def _json_float(v: float) -> float:
    # JSON has no NaN; failed records surface through the error field
    return 0.0 if not math.isfinite(v) else v
