"""Grid sweeps over catalog models and raw quartics.

A sweep specification selects a model, base parameters, up to three axes
(each a named parameter with a linear or logarithmic grid), and a set of
output columns.  Evaluation is deterministic: rows follow row-major grid
order regardless of the worker count, and numbers are formatted to 17
significant digits so repeated runs are byte-identical.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import __version__ as _version
from . import models
from .hurwitz import classify
from .msystem import QuarticPoly, char_quartic, mass_normalize, spectrum
from .hurwitz import hurwitz_H
from .krein import krein_sign
from .smallalg import matrix_eigen

MAX_POINTS = 10**7

OUTPUT_VERDICT = "verdict"
OUTPUT_ABSCISSA = "abscissa"
OUTPUT_LEADING = "leading"
OUTPUT_H = "H"
OUTPUT_KREIN = "krein"

ALL_OUTPUTS = (OUTPUT_VERDICT, OUTPUT_ABSCISSA, OUTPUT_LEADING, OUTPUT_H, OUTPUT_KREIN)


class ConfigError(ValueError):
    """Sweep specification is malformed."""


class GuardExceeded(RuntimeError):
    """Grid size exceeds the safety cap."""


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.count < 2:
            raise ConfigError(f"axis {self.name}: count must be at least 2")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"axis {self.name}: scale must be linear or log")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise ConfigError(f"axis {self.name}: log scale needs positive endpoints")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    model: str
    params: Dict[str, object] = field(default_factory=dict)
    axes: Tuple[SweepAxis, ...] = ()
    outputs: Tuple[str, ...] = (OUTPUT_VERDICT, OUTPUT_ABSCISSA)

    def __post_init__(self):
        if self.model not in MODEL_SWEEPS:
            raise ConfigError(
                f"unknown model {self.model!r}; choose from {sorted(MODEL_SWEEPS)}"
            )
        if not 1 <= len(self.axes) <= 3:
            raise ConfigError("a sweep needs between 1 and 3 axes")
        seen = set()
        for axis in self.axes:
            if axis.name in seen:
                raise ConfigError(f"duplicate axis {axis.name!r}")
            seen.add(axis.name)
        supported = MODEL_SWEEPS[self.model].outputs
        for out in self.outputs:
            if out not in supported:
                raise ConfigError(
                    f"model {self.model!r} does not provide output {out!r};"
                    f" supported: {sorted(supported)}"
                )
        total = 1
        for axis in self.axes:
            total *= axis.count
        if total > MAX_POINTS:
            raise GuardExceeded(f"grid has {total} points, cap is {MAX_POINTS}")

    @property
    def total_points(self) -> int:
        total = 1
        for axis in self.axes:
            total *= axis.count
        return total

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "params": dict(self.params),
            "axes": [
                {
                    "name": a.name,
                    "start": a.start,
                    "stop": a.stop,
                    "count": a.count,
                    "scale": a.scale,
                }
                for a in self.axes
            ],
            "outputs": list(self.outputs),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        if not isinstance(data, dict):
            raise ConfigError("sweep config must be a mapping")
        if "spec" in data and "model" not in data:
            data = data["spec"]  # re-ingest a previous JSON result
        try:
            axes = tuple(
                SweepAxis(
                    name=str(a["name"]),
                    start=float(a["start"]),
                    stop=float(a["stop"]),
                    count=int(a["count"]),
                    scale=str(a.get("scale", "linear")),
                )
                for a in data.get("axes", [])
            )
            outputs = tuple(str(o) for o in data.get("outputs", [OUTPUT_VERDICT, OUTPUT_ABSCISSA]))
            return cls(
                model=str(data["model"]),
                params=dict(data.get("params", {})),
                axes=axes,
                outputs=outputs,
            )
        except KeyError as exc:
            raise ConfigError(f"missing config key: {exc}") from exc
        except (TypeError, ValueError) as exc:
            if isinstance(exc, (ConfigError, GuardExceeded)):
                raise
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    header: Tuple[str, ...]
    rows: Tuple[tuple, ...]
    provenance: Dict[str, str]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "provenance": dict(self.provenance),
            "header": list(self.header),
            "rows": [list(r) for r in self.rows],
        }


def _leading_entry(values):
    # deterministic pick: maximal real part, ties by imaginary part
    return max(values, key=lambda v: (v.real, v.imag))


def _quartic_row(params, outputs):
    q = QuarticPoly(
        float(params.get("a1", 0.0)),
        float(params.get("a2", 0.0)),
        float(params.get("a3", 0.0)),
        float(params.get("a4", 0.0)),
    )
    verdict = classify(q)
    out = {}
    if OUTPUT_VERDICT in outputs:
        out[OUTPUT_VERDICT] = verdict.stability
    if OUTPUT_ABSCISSA in outputs:
        out[OUTPUT_ABSCISSA] = verdict.abscissa
    if OUTPUT_LEADING in outputs:
        from .smallalg import poly_roots

        roots = [r for r, _ in poly_roots(q.as_poly())]
        out[OUTPUT_LEADING] = _leading_entry(roots)
    if OUTPUT_H in outputs:
        out[OUTPUT_H] = hurwitz_H(q)
    return out


def _system_row(build):
    def row(params, outputs):
        sys = build(params)
        entries = spectrum(sys)
        values = [e.value for e in entries for _ in range(e.algebraic_multiplicity)]
        out = {}
        if OUTPUT_VERDICT in outputs or OUTPUT_H in outputs:
            q = char_quartic(mass_normalize(sys))
            if OUTPUT_VERDICT in outputs:
                out[OUTPUT_VERDICT] = classify(q).stability
            if OUTPUT_H in outputs:
                out[OUTPUT_H] = hurwitz_H(q)
        if OUTPUT_ABSCISSA in outputs:
            out[OUTPUT_ABSCISSA] = max(v.real for v in values)
        if OUTPUT_LEADING in outputs:
            out[OUTPUT_LEADING] = _leading_entry(values)
        return out

    return row


def _build_ziegler(params):
    return models.build_ziegler(
        models.ZieglerParams(
            m=float(params.get("m", 1.0)),
            c=float(params.get("c", 1.0)),
            l=float(params.get("l", 1.0)),
            P=float(params.get("P", 0.0)),
            b=float(params.get("b", 0.0)),
        )
    )


def _build_brouwer(params):
    return models.build_brouwer(
        models.BrouwerParams(
            g=float(params.get("g", 1.0)),
            k1=float(params.get("k1", 1.0)),
            k2=float(params.get("k2", 1.0)),
            omega=float(params.get("omega", 0.0)),
            c1=float(params.get("c1", 0.0)),
            c2=float(params.get("c2", 0.0)),
        )
    )


def _build_maclaurin(params):
    variant = str(params.get("variant", "inviscid"))
    q1 = params.get("q1")
    q2 = params.get("q2")
    if "q1_table" in params:
        q1 = models.load_radiative_table(params["q1_table"])
    if "q2_table" in params:
        q2 = models.load_radiative_table(params["q2_table"])
    p = models.MaclaurinParams(
        e=float(params.get("e", 0.5)),
        mu=float(params.get("mu", 0.0)),
        delta=float(params.get("delta", 0.0)),
        q1=q1,
        q2=q2,
    )
    return models.build_maclaurin(p, variant)


def _sobolev_row(params, outputs):
    p = models.SobolevParams(
        a=float(params.get("a", 1.0)),
        c=float(params.get("c", 2.0)),
        rho=float(params.get("rho", 1.0)),
        A1=float(params.get("A1", 0.0)),
        C1=float(params.get("C1", 0.0)),
        M1=float(params.get("M1", 0.0)),
        l1=float(params.get("l1", 0.0)),
        l2=float(params.get("l2", 0.0)),
        g=float(params.get("g", 1.0)),
        Omega=float(params.get("Omega", 1.0)),
    )
    B, metric = models.build_sobolev(p)
    pairs = matrix_eigen(np.asarray(B, dtype=complex))
    # evolution eigenvalues are i Omega lambda: growth = Omega * (-Im lambda)
    growth = [p.Omega * (-v.imag) for v, _ in pairs]
    out = {}
    if OUTPUT_VERDICT in outputs:
        out[OUTPUT_VERDICT] = "unstable" if max(growth) > 1e-8 else "marginally stable"
    if OUTPUT_ABSCISSA in outputs:
        out[OUTPUT_ABSCISSA] = max(growth)
    if OUTPUT_LEADING in outputs:
        lam = max(pairs, key=lambda t: (-t[0].imag, t[0].real))[0]
        out[OUTPUT_LEADING] = complex(1j * p.Omega * lam)
    if OUTPUT_KREIN in outputs:
        signs = [krein_sign(metric, u, v) for v, u in pairs]
        out[OUTPUT_KREIN] = ";".join(f"{s:+d}" for s in signs)
    return out


def _combres_row(params, outputs):
    p = models.CombResParams(
        Omega=float(params.get("Omega", 0.5)),
        eps=float(params.get("eps", 0.0)),
        mu=float(params.get("mu", 0.0)),
        omega0=float(params["omega0"]) if "omega0" in params else None,
        delta_plus=float(params.get("delta_plus", 0.0)),
    )
    steps = int(params.get("steps", 2000))
    system = models.build_combres(p)
    _, multipliers = models.monodromy(system, steps)
    radius = max(abs(m) for m in multipliers)
    growth = math.log(radius) / system.period
    out = {}
    if OUTPUT_VERDICT in outputs:
        if radius > 1.0 + 1e-9:
            out[OUTPUT_VERDICT] = "unstable"
        elif radius < 1.0 - 1e-9:
            out[OUTPUT_VERDICT] = "asymptotically stable"
        else:
            out[OUTPUT_VERDICT] = "marginally stable"
    if OUTPUT_ABSCISSA in outputs:
        out[OUTPUT_ABSCISSA] = growth
    if OUTPUT_LEADING in outputs:
        out[OUTPUT_LEADING] = _leading_entry([complex(m) for m in multipliers])
    return out


@dataclass(frozen=True)
class ModelSweep:
    row: Callable[[dict, tuple], dict]
    outputs: Tuple[str, ...]


MODEL_SWEEPS: Dict[str, ModelSweep] = {
    "quartic": ModelSweep(_quartic_row, (OUTPUT_VERDICT, OUTPUT_ABSCISSA, OUTPUT_LEADING, OUTPUT_H)),
    "ziegler": ModelSweep(_system_row(_build_ziegler), (OUTPUT_VERDICT, OUTPUT_ABSCISSA, OUTPUT_LEADING, OUTPUT_H)),
    "brouwer": ModelSweep(_system_row(_build_brouwer), (OUTPUT_VERDICT, OUTPUT_ABSCISSA, OUTPUT_LEADING, OUTPUT_H)),
    "maclaurin": ModelSweep(_system_row(_build_maclaurin), (OUTPUT_VERDICT, OUTPUT_ABSCISSA, OUTPUT_LEADING, OUTPUT_H)),
    "sobolev": ModelSweep(_sobolev_row, (OUTPUT_VERDICT, OUTPUT_ABSCISSA, OUTPUT_LEADING, OUTPUT_KREIN)),
    "combres": ModelSweep(_combres_row, (OUTPUT_VERDICT, OUTPUT_ABSCISSA, OUTPUT_LEADING)),
}


def _columns(spec: SweepSpec) -> Tuple[str, ...]:
    cols = [axis.name for axis in spec.axes]
    for out in spec.outputs:
        if out == OUTPUT_LEADING:
            cols.extend(["leading_re", "leading_im"])
        else:
            cols.append(out)
    return tuple(cols)


def _evaluate_point(spec: SweepSpec, point):
    params = dict(spec.params)
    for axis, value in zip(spec.axes, point):
        params[axis.name] = value
    data = MODEL_SWEEPS[spec.model].row(params, spec.outputs)
    row: List[object] = [float(v) for v in point]
    for out in spec.outputs:
        if out == OUTPUT_LEADING:
            lead = data[OUTPUT_LEADING]
            row.extend([lead.real, lead.imag])
        else:
            row.append(data[out])
    return tuple(row)


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    grids = [axis.grid() for axis in spec.axes]
    mesh = [tuple(float(g[i]) for g, i in zip(grids, idx))
            for idx in np.ndindex(*[axis.count for axis in spec.axes])]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda pt: _evaluate_point(spec, pt), mesh))
    else:
        rows = [_evaluate_point(spec, pt) for pt in mesh]
    provenance = {
        "model": spec.model,
        "version": _version,
        "determinism": "seedless; rows ordered by grid index",
    }
    return SweepResult(
        spec=spec, header=_columns(spec), rows=tuple(rows), provenance=provenance
    )


def format_value(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def result_to_csv(result: SweepResult) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(result.header)
    for row in result.rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def result_to_json(result: SweepResult) -> str:
    return json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n"


def load_spec(path) -> SweepSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return SweepSpec.from_dict(data)
