"""Monte Carlo experiment driver: sweeps, result tables and file formats.

A sweep varies either the common transmit-power budget or the common RSI
variance (both specified in dB, linear value ``10**(dB/10)``) over a set
of harvest requirements and independent channel realizations, running the
joint optimizer and/or the fixed-receive-beamformer baseline on each.
Realization seeds derive from the master seed and the realization index
only, so every sweep point and scheme sees the same channels and results
are reproducible row by row.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, fields, replace

from .channels import SystemParams, derive_seed, sample_channels
from .errors import InfeasibleError, ParameterError
from .joint import JointConfig, JointSolution, solve_fixed_alpha, solve_joint

SCHEME_JOINT = "joint_opt"
SCHEME_FRBV = "frbv"
_SCHEMES = (SCHEME_JOINT, SCHEME_FRBV)

SWEEP_PMAX = "pmax"
SWEEP_RSI = "rsi"

CSV_HEADER = ("scheme,sweep_value_db,q_bar,realization,seed,alpha,rho,"
              "sum_rate,rate_a,rate_b,q_harvest,p_relay,iterations,"
              "converged,infeasible")


@dataclass(frozen=True)
class SweepConfig:
    """Sweep description.

    ``sweep_values`` are dB values of the swept quantity; ``fixed_params``
    is the template whose non-swept fields apply everywhere (its ``q_bar``
    is replaced by each entry of ``q_bar_values``).
    """

    sweep_kind: str
    sweep_values: tuple[float, ...]
    n_realizations: int
    master_seed: int
    q_bar_values: tuple[float, ...]
    fixed_params: SystemParams = field(default_factory=SystemParams)
    schemes: tuple[str, ...] = (SCHEME_JOINT, SCHEME_FRBV)
    frbv_alpha: float = 0.583
    output_path: str | None = None

    def __post_init__(self):
        if self.sweep_kind not in (SWEEP_PMAX, SWEEP_RSI):
            raise ParameterError(f"unknown sweep kind {self.sweep_kind!r}")
        if not self.sweep_values:
            raise ParameterError("sweep_values must be non-empty")
        if self.n_realizations < 1:
            raise ParameterError("n_realizations must be >= 1")
        if not self.q_bar_values:
            raise ParameterError("q_bar_values must be non-empty")
        if not self.schemes or any(s not in _SCHEMES for s in self.schemes):
            raise ParameterError(
                f"schemes must be a non-empty subset of {_SCHEMES}")
        if not (0.0 <= self.frbv_alpha <= 1.0):
            raise ParameterError("frbv_alpha must lie in [0, 1]")


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    sweep_value_db: float
    q_bar: float
    realization: int
    seed: int
    alpha: float
    rho: float
    sum_rate: float
    rate_a: float
    rate_b: float
    q_harvest: float
    p_relay: float
    iterations: int
    converged: bool
    infeasible: bool


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]


def apply_sweep_value(template: SystemParams, sweep_kind: str,
                      value_db: float) -> SystemParams:
    """Instantiate the template at one sweep point."""
    linear = 10.0 ** (value_db / 10.0)
    if sweep_kind == SWEEP_PMAX:
        return replace(template, p_a=linear, p_b=linear, p_r=linear)
    if sweep_kind == SWEEP_RSI:
        return replace(template, var_rsi_a=linear, var_rsi_b=linear,
                       var_rsi_r=linear)
    raise ParameterError(f"unknown sweep kind {sweep_kind!r}")


def run_single(params: SystemParams, seed: int, scheme: str,
               joint_cfg: JointConfig | None = None,
               frbv_alpha: float = 0.583) -> JointSolution:
    """Sample one channel and solve it under the given scheme.

    ``joint_opt`` searches the receive parameterization; ``frbv`` holds it
    at ``frbv_alpha``.  Infeasibility propagates as an exception.
    """
    if scheme not in _SCHEMES:
        raise ParameterError(f"unknown scheme {scheme!r}")
    cfg = joint_cfg if joint_cfg is not None else JointConfig()
    ch = sample_channels(params, seed)
    if scheme == SCHEME_FRBV:
        return solve_fixed_alpha(frbv_alpha, ch, params, cfg)
    return solve_joint(ch, params, cfg)


def _task_row(cfg: SweepConfig, joint_cfg: JointConfig, value_db: float,
              q_bar: float, scheme: str, realization: int) -> SweepRow:
    params = replace(apply_sweep_value(cfg.fixed_params, cfg.sweep_kind,
                                       value_db), q_bar=q_bar)
    seed = derive_seed(cfg.master_seed, realization)
    common = dict(scheme=scheme, sweep_value_db=float(value_db),
                  q_bar=float(q_bar), realization=realization, seed=seed)
    try:
        js = run_single(params, seed, scheme, joint_cfg, cfg.frbv_alpha)
    except InfeasibleError:
        return SweepRow(alpha=math.nan, rho=math.nan, sum_rate=math.nan,
                        rate_a=math.nan, rate_b=math.nan, q_harvest=math.nan,
                        p_relay=math.nan, iterations=0, converged=False,
                        infeasible=True, **common)
    rep = js.report
    return SweepRow(alpha=js.alpha_star, rho=js.solution.rho,
                    sum_rate=rep.sum_rate, rate_a=rep.rate_a,
                    rate_b=rep.rate_b, q_harvest=rep.q_harvest,
                    p_relay=rep.p_relay, iterations=js.iterations_outer,
                    converged=js.converged, infeasible=False, **common)


def run_sweep(cfg: SweepConfig, joint_cfg: JointConfig | None = None,
              jobs: int = 1, write: bool = True) -> SweepResult:
    """Run every (sweep value, harvest level, scheme, realization) cell.

    Row order is deterministic: sweep value, then harvest level, then
    scheme (in configured order), then realization.  When the joint
    scheme runs, the baseline's fixed alpha is added to its search grid
    so the joint result dominates the baseline realization by
    realization.  With ``jobs > 1`` cells run in parallel processes;
    results are identical to the serial order.
    """
    joint_cfg = joint_cfg if joint_cfg is not None else JointConfig()
    if SCHEME_JOINT in cfg.schemes:
        grid = joint_cfg.alpha_grid
        if cfg.frbv_alpha not in grid.include:
            joint_cfg = replace(
                joint_cfg,
                alpha_grid=replace(grid, include=grid.include + (cfg.frbv_alpha,)))

    tasks = [(value_db, q_bar, scheme, i)
             for value_db in cfg.sweep_values
             for q_bar in cfg.q_bar_values
             for scheme in cfg.schemes
             for i in range(cfg.n_realizations)]
    if jobs == 1:
        rows = [_task_row(cfg, joint_cfg, *task) for task in tasks]
    else:  # joblib semantics, e.g. -1 uses every core
        from joblib import Parallel, delayed
        rows = Parallel(n_jobs=jobs)(
            delayed(_task_row)(cfg, joint_cfg, *task) for task in tasks)
    result = SweepResult(rows=tuple(rows))
    if write and cfg.output_path:
        emit(result, cfg.output_path, "csv")
    return result


# ---------------------------------------------------------------------------
# serialization

def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _quantize(x: float) -> float:
    return float(f"{x:.10g}")


def emit_text(result: SweepResult, fmt: str = "csv") -> str:
    """Render a result table; floats carry 10 significant digits."""
    if fmt == "csv":
        out = io.StringIO()
        out.write(CSV_HEADER + "\n")
        for row in result.rows:
            out.write(",".join(_fmt(getattr(row, f.name))
                               for f in fields(SweepRow)) + "\n")
        return out.getvalue()
    if fmt == "json":
        payload = []
        for row in result.rows:
            d = {}
            for f in fields(SweepRow):
                value = getattr(row, f.name)
                d[f.name] = _quantize(value) if isinstance(value, float) else value
            payload.append(d)
        return json.dumps({"rows": payload}, indent=1) + "\n"
    raise ParameterError(f"unknown output format {fmt!r}")


def emit(result: SweepResult, path: str, fmt: str = "csv") -> None:
    """Write the table to ``path``."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_text(result, fmt))


def _parse_bool(s) -> bool:
    if isinstance(s, bool):
        return s
    if s in ("true", "True"):
        return True
    if s in ("false", "False"):
        return False
    raise ParameterError(f"invalid boolean field {s!r}")


def parse_text(text: str, fmt: str = "csv") -> SweepResult:
    """Inverse of :func:`emit_text`."""
    rows = []
    if fmt == "csv":
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header != CSV_HEADER.split(","):
            raise ParameterError("unexpected CSV header")
        for rec in reader:
            if not rec:
                continue
            d = dict(zip(CSV_HEADER.split(","), rec))
            rows.append(_row_from_strings(d))
    elif fmt == "json":
        payload = json.loads(text)
        for d in payload["rows"]:
            rows.append(SweepRow(**{**d,
                                    "converged": _parse_bool(d["converged"]),
                                    "infeasible": _parse_bool(d["infeasible"])}))
    else:
        raise ParameterError(f"unknown output format {fmt!r}")
    return SweepResult(rows=tuple(rows))


def parse_file(path: str, fmt: str = "csv") -> SweepResult:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_text(fh.read(), fmt)


def _row_from_strings(d: dict) -> SweepRow:
    return SweepRow(
        scheme=d["scheme"],
        sweep_value_db=float(d["sweep_value_db"]),
        q_bar=float(d["q_bar"]),
        realization=int(d["realization"]),
        seed=int(d["seed"]),
        alpha=float(d["alpha"]),
        rho=float(d["rho"]),
        sum_rate=float(d["sum_rate"]),
        rate_a=float(d["rate_a"]),
        rate_b=float(d["rate_b"]),
        q_harvest=float(d["q_harvest"]),
        p_relay=float(d["p_relay"]),
        iterations=int(d["iterations"]),
        converged=_parse_bool(d["converged"]),
        infeasible=_parse_bool(d["infeasible"]),
    )


def summarize(result: SweepResult) -> list[dict]:
    """Per (scheme, sweep value, harvest level) averages over feasible
    rows, with the infeasible count reported alongside."""
    groups: dict[tuple, list[SweepRow]] = {}
    order = []
    for row in result.rows:
        key = (row.scheme, row.sweep_value_db, row.q_bar)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row)
    out = []
    for key in order:
        rows = groups[key]
        feasible = [r for r in rows if not r.infeasible]
        n_f = len(feasible)
        out.append({
            "scheme": key[0],
            "sweep_value_db": key[1],
            "q_bar": key[2],
            "n_feasible": n_f,
            "n_infeasible": len(rows) - n_f,
            "mean_sum_rate": (sum(r.sum_rate for r in feasible) / n_f
                              if n_f else math.nan),
            "mean_q_harvest": (sum(r.q_harvest for r in feasible) / n_f
                               if n_f else math.nan),
        })
    return out


# ---------------------------------------------------------------------------
# flat key/value config files

_SWEEP_KEYS = {"sweep_kind", "sweep_values", "n_realizations", "master_seed",
               "q_bar_values", "schemes", "frbv_alpha", "output_path"}
_PARAM_KEYS = {"p_a", "p_b", "p_r", "q_bar", "var_rsi_a", "var_rsi_b",
               "var_rsi_r", "var_proc", "m_t", "m_r", "beta", "tau"}
_INT_PARAM_KEYS = {"m_t", "m_r", "tau"}


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines ('#' starts a comment).

    Keys must be sweep or system-parameter field names; anything else is
    an error.  Comma-separated values parse as lists.
    """
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _SWEEP_KEYS | _PARAM_KEYS:
            raise ParameterError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ParameterError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    return raw


def load_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def system_params_from_config(raw: dict) -> SystemParams:
    """Build the parameter template from the config's parameter keys."""
    kwargs = {}
    for key in _PARAM_KEYS & set(raw):
        kwargs[key] = (int(raw[key]) if key in _INT_PARAM_KEYS
                       else float(raw[key]))
    return SystemParams(**kwargs)


def sweep_config_from_config(raw: dict) -> SweepConfig:
    """Build the sweep description; requires the sweep keys."""
    required = ("sweep_kind", "sweep_values", "n_realizations", "master_seed",
                "q_bar_values")
    missing = [k for k in required if k not in raw]
    if missing:
        raise ParameterError(f"missing config keys: {', '.join(missing)}")
    kwargs = dict(
        sweep_kind=raw["sweep_kind"],
        sweep_values=tuple(float(v) for v in _split(raw["sweep_values"])),
        n_realizations=int(raw["n_realizations"]),
        master_seed=int(raw["master_seed"]),
        q_bar_values=tuple(float(v) for v in _split(raw["q_bar_values"])),
        fixed_params=system_params_from_config(raw),
    )
    if "schemes" in raw:
        kwargs["schemes"] = tuple(_split(raw["schemes"]))
    if "frbv_alpha" in raw:
        kwargs["frbv_alpha"] = float(raw["frbv_alpha"])
    if "output_path" in raw:
        kwargs["output_path"] = raw["output_path"]
    return SweepConfig(**kwargs)


def _split(value: str) -> list[str]:
    return [part.strip() for part in value.split(",") if part.strip()]
