"""Scene files, check execution and JSON report documents.

A scene is a JSON object with exactly these blocks::

    {
      "schema_version": 1,
      "ambient":   {"interval": [lo, hi], "f": "...", "fiber": "...", "n": int},
      "immersion": {"preset": name, "params": {...}}
                   or {"components": [...], "chart": {"names": [...],
                       "lower": [...], "upper": [...]}},
      "grid":      {"samples": {var: int, ...}, "margins": {var: frac, ...}},
      "checks":    ["lemma1", "soliton", "structural", "theorem1", ...,
                    "spaceform c=<value>", "rotational-classification"],
      "output":    {"report": path, "mesh": path-optional}
    }

Interval endpoints may be the strings "inf" / "-inf".  Unknown fields
anywhere are validation errors, not silently ignored.  Reports are
deterministic: identical scenes produce byte-identical documents apart
from the timing field.
"""

from __future__ import annotations

import json
import math
import re
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .ambient import WarpedProduct
from .catalogue import build_preset
from .errors import DomainError, SceneError, WarpGeoError
from .expr import parse as parse_expr, variables_in
from .hypersurface import ChartBox, Immersion
from .objmesh import surface_vertices, write_obj
from .rotational import verify_classification
from .soliton import (
    FD_TOL,
    SOLITON_TOL,
    Verdict,
    check_hypotheses,
    hessian_height_paths,
    soliton_residual,
    structural_identity,
)

SCHEMA_VERSION = 1
SPACEFORM_RE = re.compile(r"^spaceform\s+c=(-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)$")
CHECK_NAMES = (
    "lemma1",
    "soliton",
    "structural",
    "theorem1",
    "theorem3",
    "theorem4a",
    "theorem4b",
    "theorem5",
    "rotational-classification",
)

MESH_WARNING = (
    "mesh coordinates are ambient-chart coordinates, not an isometric "
    "embedding; do not read distances from the render"
)


def _require_keys(block, allowed, required, where):
    unknown = set(block) - set(allowed)
    if unknown:
        raise SceneError(
            f"unknown field(s) {sorted(unknown)}", field=where
        )
    for key in required:
        if key not in block:
            raise SceneError(f"missing required field {key!r}", field=where)


def _parse_endpoint(value, where):
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity"):
            return math.inf
        if text == "-inf":
            return -math.inf
        raise SceneError(f"bad interval endpoint {value!r}", field=where)
    if isinstance(value, (int, float)):
        return float(value)
    raise SceneError(f"bad interval endpoint {value!r}", field=where)


@dataclass
class Scene:
    raw: dict
    ambient: WarpedProduct
    immersion: Immersion
    profile: object  # RotationalProfile for rotational presets, else None
    grid: list
    checks: list
    report_path: str | None
    mesh_path: str | None


def validate_scene(data):
    """Validate a scene dictionary and build the runtime objects."""
    if not isinstance(data, dict):
        raise SceneError("scene must be a JSON object")
    _require_keys(
        data,
        ("schema_version", "ambient", "immersion", "grid", "checks", "output"),
        ("ambient", "immersion", "checks"),
        where="<root>",
    )
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SceneError(
            f"unsupported schema_version {version!r}", field="schema_version"
        )

    amb = data["ambient"]
    _require_keys(amb, ("interval", "f", "fiber", "n"), ("interval", "f", "fiber", "n"), "ambient")
    interval = amb["interval"]
    if not isinstance(interval, (list, tuple)) or len(interval) != 2:
        raise SceneError("interval must be a [lo, hi] pair", field="ambient.interval")
    lo = _parse_endpoint(interval[0], "ambient.interval")
    hi = _parse_endpoint(interval[1], "ambient.interval")
    if amb["fiber"] not in ("euclidean", "sphere"):
        raise SceneError(
            f"fiber must be 'euclidean' or 'sphere', got {amb['fiber']!r}",
            field="ambient.fiber",
        )
    if not isinstance(amb["n"], int) or amb["n"] < 1:
        raise SceneError("n must be a positive integer", field="ambient.n")
    try:
        f_expr = parse_expr(str(amb["f"]), variables={"t"})
        ambient = WarpedProduct((lo, hi), f_expr, amb["fiber"], amb["n"])
    except WarpGeoError as exc:
        raise SceneError(str(exc), field="ambient.f") from None
    except ValueError as exc:
        raise SceneError(str(exc), field="ambient") from None

    imm_block = data["immersion"]
    profile = None
    if "preset" in imm_block:
        _require_keys(imm_block, ("preset", "params"), ("preset",), "immersion")
        immersion, profile = build_preset(
            str(imm_block["preset"]), ambient, imm_block.get("params")
        )
    else:
        _require_keys(imm_block, ("components", "chart"), ("components", "chart"), "immersion")
        chart_block = imm_block["chart"]
        _require_keys(chart_block, ("names", "lower", "upper"), ("names", "lower", "upper"), "immersion.chart")
        try:
            chart = ChartBox(
                tuple(map(str, chart_block["names"])),
                tuple(map(float, chart_block["lower"])),
                tuple(map(float, chart_block["upper"])),
            )
        except ValueError as exc:
            raise SceneError(str(exc), field="immersion.chart") from None
        components = imm_block["components"]
        if not isinstance(components, list):
            raise SceneError("components must be a list", field="immersion.components")
        exprs = []
        for idx, src in enumerate(components):
            try:
                expr = parse_expr(str(src))
            except WarpGeoError as exc:
                raise SceneError(
                    str(exc), field=f"immersion.components[{idx}]"
                ) from None
            extra = variables_in(expr) - set(chart.names)
            if extra:
                raise SceneError(
                    f"undeclared variables {sorted(extra)}",
                    field=f"immersion.components[{idx}]",
                )
            exprs.append(expr)
        try:
            immersion = Immersion(ambient, chart, exprs)
        except DomainError:
            raise  # surfaces as a numeric error, not a validation error
        except WarpGeoError as exc:
            raise SceneError(str(exc), field="immersion") from None
        except ValueError as exc:
            raise SceneError(str(exc), field="immersion") from None

    grid_block = data.get("grid", {})
    _require_keys(grid_block, ("samples", "margins"), (), "grid")
    samples = grid_block.get("samples", {})
    margins = grid_block.get("margins", {})
    counts = {}
    for name in immersion.chart.names:
        count = samples.get(name, 7)
        if not isinstance(count, int) or count < 3:
            raise SceneError(
                f"sample count for {name!r} must be an integer >= 3",
                field="grid.samples",
            )
        counts[name] = count
    unknown = set(samples) - set(immersion.chart.names)
    if unknown:
        raise SceneError(
            f"samples given for unknown variables {sorted(unknown)}",
            field="grid.samples",
        )
    unknown = set(margins) - set(immersion.chart.names)
    if unknown:
        raise SceneError(
            f"margins given for unknown variables {sorted(unknown)}",
            field="grid.margins",
        )
    margin_map = {}
    for name in immersion.chart.names:
        frac = float(margins.get(name, 0.05))
        if not 0.0 < frac < 0.5:
            raise SceneError(
                f"margin for {name!r} must lie in (0, 0.5)", field="grid.margins"
            )
        margin_map[name] = frac
    grid = immersion.chart.grid(counts, margin_map)

    checks = []
    raw_checks = data["checks"]
    if not isinstance(raw_checks, list) or not raw_checks:
        raise SceneError("checks must be a non-empty list", field="checks")
    for raw in raw_checks:
        raw = str(raw)
        match = SPACEFORM_RE.match(raw)
        if match:
            checks.append(("spaceform", raw, float(match.group(1))))
        elif raw in CHECK_NAMES:
            checks.append((raw, raw, None))
        else:
            raise SceneError(f"unknown check {raw!r}", field="checks")

    output = data.get("output", {})
    _require_keys(output, ("report", "mesh"), (), "output")
    return Scene(
        raw=data,
        ambient=ambient,
        immersion=immersion,
        profile=profile,
        grid=grid,
        checks=checks,
        report_path=output.get("report"),
        mesh_path=output.get("mesh"),
    )


def load_scene(path):
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise SceneError(f"cannot read scene file: {exc}")
    except json.JSONDecodeError as exc:
        raise SceneError(f"scene file is not valid JSON: {exc}")
    return validate_scene(data)


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "not_applicable"
    sup_error: float | None = None
    worst_point: tuple | None = None
    worst_value: float | None = None  # error or margin at the worst point
    extras: dict = field(default_factory=dict)

    def to_dict(self, chart_names):
        out = {"name": self.name, "status": self.status}
        if self.sup_error is not None:
            out["sup_error"] = self.sup_error
        if self.worst_point is not None:
            value = self.worst_value if self.worst_value is not None else self.sup_error
            out["worst"] = {
                "point": dict(zip(chart_names, self.worst_point)),
                "value": value,
            }
        if self.extras:
            out["extras"] = self.extras
        return out


def _run_lemma1(scene, state):
    sup = 0.0
    worst = None
    for p in scene.grid:
        lemma, direct = hessian_height_paths(scene.immersion, p)
        err = float(np.max(np.abs(lemma - direct)))
        if err > sup:
            sup = err
            worst = p
    status = "pass" if sup < SOLITON_TOL else "fail"
    return CheckResult("lemma1", status, sup_error=sup, worst_point=worst)


def _soliton_report(scene, state):
    if "soliton" not in state:
        state["soliton"] = soliton_residual(scene.immersion, scene.grid)
    return state["soliton"]


def _run_soliton(scene, state):
    report = _soliton_report(scene, state)
    status = "pass" if report.verdict is Verdict.SOLITON else "fail"
    return CheckResult(
        "soliton",
        status,
        sup_error=report.residual_sup,
        worst_point=report.worst_point,
        extras={
            "verdict": report.verdict.value,
            "classification": report.classification.value,
        },
    )


def _run_structural(scene, state):
    report = _soliton_report(scene, state)
    if report.verdict is not Verdict.SOLITON:
        return CheckResult(
            "structural",
            "not_applicable",
            extras={"reason": "soliton verdict required"},
        )
    result = structural_identity(scene.immersion, scene.grid)
    status = "pass" if result.sup_error < FD_TOL else "fail"
    return CheckResult(
        "structural", status, sup_error=result.sup_error, worst_point=result.worst_point
    )


def _run_theorem(name):
    def runner(scene, state):
        report = check_hypotheses(scene.immersion, scene.grid, name)
        extras = {k: v for k, v in report.details.items()}
        if report.worst_margin is not None:
            extras["worst_margin"] = report.worst_margin
        return CheckResult(
            name,
            report.status,
            sup_error=report.sup_error,
            worst_point=report.worst_point,
            worst_value=report.worst_margin,
            extras=extras,
        )

    return runner


def _run_spaceform(c):
    def runner(scene, state):
        window = scene.ambient.probe_window()
        probes = np.linspace(window[0], window[1], 200)
        result = scene.ambient.check_space_form(c, probes)
        sup = max(result.ratio_residual, result.second_residual)
        return CheckResult(
            f"spaceform c={c!r}",
            "pass" if result.passed else "fail",
            sup_error=sup,
            extras={"c": c},
        )

    return runner


def _run_rotational_classification(scene, state):
    if scene.profile is None:
        return CheckResult(
            "rotational-classification",
            "not_applicable",
            extras={"reason": "immersion is not a rotational preset"},
        )
    report = verify_classification(scene.profile, interval=scene.ambient.interval)
    status = "pass" if report.classified else "fail"
    sup = max(
        report.balance_residual,
        report.sigma_constancy,
        report.soliton.residual_sup,
        report.logf_slope_variation,
    )
    return CheckResult(
        "rotational-classification",
        status,
        sup_error=sup,
        extras={
            "sigma_constancy": report.sigma_constancy,
            "balance_residual": report.balance_residual,
            "logf_slope_variation": report.logf_slope_variation,
        },
    )


def _locate_domain_error(scene):
    """First grid point whose evaluation raises a DomainError, if any."""
    from .hypersurface import shape_data

    for p in scene.grid:
        try:
            shape_data(scene.immersion, p)
        except DomainError:
            return p
        except WarpGeoError:
            continue
    return None


def run_scene(scene):
    """Execute the requested checks; returns (report_dict, all_passed).

    Raises DomainError annotated with the chart location if a numeric
    evaluation leaves its domain mid-run.
    """
    started = time.perf_counter()
    state = {}
    results = []

    runners = {
        "lemma1": _run_lemma1,
        "soliton": _run_soliton,
        "structural": _run_structural,
        "rotational-classification": _run_rotational_classification,
    }
    for name in ("theorem1", "theorem3", "theorem4a", "theorem4b", "theorem5"):
        runners[name] = _run_theorem(name)

    try:
        for kind, raw, param in scene.checks:
            if kind == "spaceform":
                runner = _run_spaceform(param)
            else:
                runner = runners[kind]
            results.append(runner(scene, state))
    except DomainError as exc:
        location = _locate_domain_error(scene)
        where = (
            f"chart point {dict(zip(scene.immersion.chart.names, location))!r}"
            if location is not None
            else "an interior chart point"
        )
        raise DomainError(f"{exc} (at {where})", exc.expression) from exc

    if "soliton" in state:
        for result in results:
            if result.name == "soliton" or result.status == "not_applicable":
                continue
            if result.sup_error is not None:
                state["soliton"].identity_checks[result.name] = result.sup_error
            elif result.worst_value is not None:
                # inequality checks: record the violation magnitude
                state["soliton"].identity_checks[result.name] = max(
                    0.0, -result.worst_value
                )

    warnings = []
    if scene.mesh_path:
        chart = scene.immersion.chart
        u_values = chart.axis_points(chart.names[0], 33, 0.02)
        v_values = chart.axis_points(chart.names[1], 33, 0.02)
        write_obj(scene.mesh_path, surface_vertices(scene.immersion, u_values, v_values))
        warnings.append(MESH_WARNING)

    soliton_block = None
    if "soliton" in state:
        soliton_block = state["soliton"].to_dict()

    report = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "scene": scene.raw,
        "checks": [r.to_dict(scene.immersion.chart.names) for r in results],
        "soliton": soliton_block,
        "warnings": warnings,
        "timing_seconds": time.perf_counter() - started,
    }
    all_passed = all(r.status in ("pass", "not_applicable") for r in results)
    return report, all_passed


def report_to_json(report):
    return json.dumps(report, indent=2) + "\n"


def write_report(path, report):
    with open(path, "w") as handle:
        handle.write(report_to_json(report))
