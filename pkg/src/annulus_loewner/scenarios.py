"""Scenario files: JSON schema, loading, and execution.

A scenario bundles an id, a kind (kernel_probe / evolve / verify /
lebedev), the kind-specific payload, and an optional output sink.  The
machine-readable schema printed by ``emit_schema`` validates every shipped
scenario and is stable across patch versions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import jsonschema
import numpy as np

from .domains import RadiusPath, validate
from .drivers import HerglotzPath, MeasurePath, ScalarDriver, UnitCircleDriver
from .errors import ScenarioError
from .fields import FieldSpec
from .kernels import villat_kernel
from .lebedev import LebedevSpec, integrate_mt, integrate_slit
from .measures import CircleMeasure
from .ode import EvolutionMap, IntegratorConfig
from .verify import (
    VerificationReport,
    check_containment,
    check_degenerate_extension,
    check_ef_axioms,
    check_fixed_points,
    check_index_preservation,
    check_injectivity,
    check_inversion_symmetry,
    check_lifting,
    probe_ring,
)

_COMPLEX = {
    "type": "object",
    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
    "required": ["re"],
    "additionalProperties": False,
}

_MEASURE = {
    "type": "object",
    "properties": {
        "atoms": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"angle": {"type": "number"}, "mass": {"type": "number"}},
                "required": ["angle", "mass"],
                "additionalProperties": False,
            },
        },
        "uniform": {"type": "number"},
    },
    "additionalProperties": False,
}

_SCALAR_DRIVER = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["constant", "cosine", "piecewise_constant"]},
        "value": {"type": "number"},
        "amplitude": {"type": "number"},
        "omega": {"type": "number"},
        "phase": {"type": "number"},
        "times": {"type": "array", "items": {"type": "number"}},
        "values": {"type": "array", "items": {"type": "number"}},
    },
    "required": ["kind"],
}

_UNIT_DRIVER = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["constant_angle", "rotating", "piecewise_constant_angle"]},
        "angle": {"type": "number"},
        "omega": {"type": "number"},
        "phase": {"type": "number"},
        "times": {"type": "array", "items": {"type": "number"}},
        "angles": {"type": "array", "items": {"type": "number"}},
    },
    "required": ["kind"],
}

_DOMAIN = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["constant", "exponential", "zero"]},
        "r0": {"type": "number"},
        "rate": {"type": "number"},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

_MEASURE_PATH = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["static", "fixed_points"]},
        "mu1": _MEASURE,
        "mu2": _MEASURE,
        "n_points": {"type": "integer", "minimum": 1},
        "r_star": {"type": "number"},
        "alpha_offset": {"type": "number"},
    },
    "required": ["kind"],
}

_FIELD = {
    "type": "object",
    "properties": {
        "domain": _DOMAIN,
        "horizon": {"type": "number", "exclusiveMinimum": 0},
        "C": _SCALAR_DRIVER,
        "measures": _MEASURE_PATH,
        "alpha": _SCALAR_DRIVER,
        "herglotz": {
            "type": "object",
            "properties": {"kind": {"enum": ["static"]}, "measure": _MEASURE},
            "required": ["kind", "measure"],
            "additionalProperties": False,
        },
    },
    "required": ["domain", "horizon"],
    "additionalProperties": False,
}

_INTEGRATOR = {
    "type": "object",
    "properties": {
        "rel_tol": {"type": "number"},
        "abs_tol": {"type": "number"},
        "h_init": {"type": "number"},
        "h_min": {"type": "number"},
        "h_max": {"type": "number"},
        "boundary_guard": {"type": "number"},
    },
    "additionalProperties": False,
}

SCENARIO_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "annulus-loewner scenario",
    "type": "object",
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "kind": {"enum": ["kernel_probe", "evolve", "verify", "lebedev"]},
        "payload": {"type": "object"},
        "output": {
            "type": "object",
            "properties": {
                "path": {"type": "string", "minLength": 1},
                "format": {"enum": ["csv", "json"]},
            },
            "required": ["path", "format"],
            "additionalProperties": False,
        },
    },
    "required": ["id", "kind", "payload"],
    "additionalProperties": False,
    "$defs": {
        "kernel_probe": {
            "type": "object",
            "properties": {"r": {"type": "number"}, "z": _COMPLEX},
            "required": ["r", "z"],
            "additionalProperties": False,
        },
        "evolve": {
            "type": "object",
            "properties": {
                "field": _FIELD,
                "s": {"type": "number"},
                "t": {"type": "number"},
                "points": {"type": "array", "items": _COMPLEX, "minItems": 1},
                "integrator": _INTEGRATOR,
            },
            "required": ["field", "s", "t", "points"],
            "additionalProperties": False,
        },
        "verify": {
            "type": "object",
            "properties": {
                "field": _FIELD,
                "seed": {"type": "integer"},
                "checks": {
                    "type": "array",
                    "items": {
                        "enum": [
                            "ef_axioms", "containment", "index", "injectivity",
                            "inversion", "lifting", "fixed_points",
                            "degenerate_extension",
                        ]
                    },
                },
                "fixed_points": {
                    "type": "object",
                    "properties": {
                        "n_points": {"type": "integer", "minimum": 1},
                        "r_star": {"type": "number"},
                    },
                    "required": ["n_points", "r_star"],
                    "additionalProperties": False,
                },
                "integrator": _INTEGRATOR,
            },
            "required": ["field"],
            "additionalProperties": False,
        },
        "lebedev": {
            "type": "object",
            "properties": {
                "m": {"type": "number"},
                "M": {"type": "number"},
                "lambda": _SCALAR_DRIVER,
                "kappa1": _UNIT_DRIVER,
                "kappa2": _UNIT_DRIVER,
                "horizon": {"type": "number", "exclusiveMinimum": 0},
                "seeds": {"type": "array", "items": _COMPLEX, "minItems": 1},
                "integrator": _INTEGRATOR,
            },
            "required": ["m", "M", "lambda", "kappa1", "kappa2", "horizon", "seeds"],
            "additionalProperties": False,
        },
    },
}


def emit_schema() -> str:
    """Stable, machine-readable scenario schema."""
    return json.dumps(SCENARIO_SCHEMA, indent=2, sort_keys=True)


def _as_complex(payload: dict) -> complex:
    return complex(payload["re"], payload.get("im", 0.0))


def _field_from_json(payload: dict) -> FieldSpec:
    path = RadiusPath.from_json(payload["domain"])
    ds = validate(path, payload["horizon"])
    c_driver = (
        ScalarDriver.from_json(payload["C"]) if "C" in payload
        else ScalarDriver.constant(0.0)
    )
    kwargs = {}
    if "measures" in payload:
        kwargs["measures"] = MeasurePath.from_json(payload["measures"], path=path)
    if "alpha" in payload:
        kwargs["alpha"] = ScalarDriver.from_json(payload["alpha"])
    if "herglotz" in payload:
        kwargs["herglotz"] = HerglotzPath.from_json(payload["herglotz"])
    return FieldSpec(ds=ds, C=c_driver, **kwargs)


def _integrator_from_json(payload: Optional[dict]) -> IntegratorConfig:
    if not payload:
        return IntegratorConfig()
    return IntegratorConfig(**payload)


@dataclass
class Scenario:
    id: str
    kind: str
    payload: dict
    output_path: Optional[str]
    output_format: Optional[str]

    @classmethod
    def from_json(cls, doc: dict) -> "Scenario":
        try:
            jsonschema.validate(doc, SCENARIO_SCHEMA)
            jsonschema.validate(
                doc["payload"], SCENARIO_SCHEMA["$defs"][doc["kind"]]
            )
        except jsonschema.ValidationError as exc:
            raise ScenarioError(f"scenario failed schema validation: {exc.message}")
        out = doc.get("output")
        return cls(
            id=doc["id"],
            kind=doc["kind"],
            payload=doc["payload"],
            output_path=out["path"] if out else None,
            output_format=out["format"] if out else None,
        )


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed JSON in {path}: {exc}")
    return Scenario.from_json(doc)


def _sibling_path(base: str, suffix: str) -> Path:
    p = Path(base)
    return p.with_name(p.stem + suffix + p.suffix)


def run_kernel_probe(sc: Scenario) -> dict:
    value = villat_kernel(sc.payload["r"], _as_complex(sc.payload["z"]))
    result = {
        "id": sc.id,
        "r": sc.payload["r"],
        "z": {"re": _as_complex(sc.payload["z"]).real, "im": _as_complex(sc.payload["z"]).imag},
        "value": {"re": value.real, "im": value.imag},
    }
    if sc.output_path:
        Path(sc.output_path).parent.mkdir(parents=True, exist_ok=True)
        Path(sc.output_path).write_text(
            json.dumps(result, indent=2, sort_keys=True), encoding="utf-8"
        )
    return result


def run_evolve(sc: Scenario) -> list:
    spec = _field_from_json(sc.payload["field"])
    cfg = _integrator_from_json(sc.payload.get("integrator"))
    emap = EvolutionMap(spec, cfg)
    s = sc.payload["s"]
    t_end = sc.payload["t"]
    trajectories = []
    for k, zp in enumerate(sc.payload["points"]):
        traj = emap.trajectory(s, t_end, _as_complex(zp))
        trajectories.append(traj)
        if sc.output_path:
            out = _sibling_path(sc.output_path, f"_{k:03d}")
            out.parent.mkdir(parents=True, exist_ok=True)
            traj.write_csv(out)
    return trajectories


def run_verify(sc: Scenario, seed: Optional[int] = None) -> VerificationReport:
    spec = _field_from_json(sc.payload["field"])
    cfg = _integrator_from_json(sc.payload.get("integrator"))
    emap = EvolutionMap(spec, cfg)
    horizon = sc.payload["field"]["horizon"]
    seed = seed if seed is not None else sc.payload.get("seed", 0)
    requested = sc.payload.get("checks")
    degenerate = spec.degenerate

    def wanted(name: str, default_on: bool) -> bool:
        if requested is not None:
            return name in requested
        return default_on

    reports = []
    if wanted("ef_axioms", True):
        reports.append(
            check_ef_axioms(emap, horizon, seed=seed, scenario=sc.id)
        )
    if wanted("containment", True):
        reports.append(check_containment(emap, horizon, seed=seed, scenario=sc.id))
    if wanted("index", not degenerate) and not degenerate:
        r0 = spec.ds.radius(0.0)
        reports.append(
            check_index_preservation(
                emap, 0.0, horizon, 0.5 * (1.0 + r0), scenario=sc.id, seed=seed
            )
        )
    if wanted("injectivity", True):
        grid = probe_ring(emap, 0.0, 60, seed + 3)
        reports.append(
            check_injectivity(emap, 0.0, horizon, grid, scenario=sc.id, seed=seed)
        )
    if wanted("inversion", not degenerate) and not degenerate:
        rep = VerificationReport(scenario=sc.id, seed=seed)
        worst = max(
            check_inversion_symmetry(emap, 0.0, horizon, z)
            for z in probe_ring(emap, 0.0, 5, seed + 4)
        )
        rep.add("inversion_symmetry", worst, 1e-6)
        reports.append(rep)
    if wanted("lifting", not degenerate) and not degenerate:
        reports.append(
            check_lifting(emap, 0.0, horizon, seed=seed, scenario=sc.id)
        )
    fp = sc.payload.get("fixed_points")
    if fp and wanted("fixed_points", True):
        reports.append(
            check_fixed_points(
                emap, fp["n_points"], fp["r_star"], horizon, scenario=sc.id
            )
        )
    if wanted("degenerate_extension", degenerate) and degenerate:
        reports.append(
            check_degenerate_extension(emap, 0.0, horizon, scenario=sc.id)
        )
    report = VerificationReport.merged(reports)
    report.scenario = sc.id
    report.seed = seed
    if sc.output_path:
        Path(sc.output_path).parent.mkdir(parents=True, exist_ok=True)
        Path(sc.output_path).write_text(report.to_json_text(), encoding="utf-8")
    return report


def run_lebedev(sc: Scenario) -> dict:
    p = sc.payload
    spec = LebedevSpec(
        m=p["m"],
        M=p["M"],
        lam=ScalarDriver.from_json(p["lambda"]),
        kappa1=UnitCircleDriver.from_json(p["kappa1"]),
        kappa2=UnitCircleDriver.from_json(p["kappa2"]),
    )
    cfg = _integrator_from_json(p.get("integrator"))
    horizon = p["horizon"]
    mt = integrate_mt(spec, horizon)
    band_ok = all(
        spec.r(t) < v < 1.0 for t, v in zip(mt.times, mt.values)
    )
    trajectories = []
    for k, zp in enumerate(p["seeds"]):
        traj = integrate_slit(spec, _as_complex(zp), horizon, cfg, mt=mt)
        trajectories.append(traj)
        if sc.output_path:
            out = _sibling_path(sc.output_path, f"_f{k:03d}")
            out.parent.mkdir(parents=True, exist_ok=True)
            traj.write_csv(out)
    if sc.output_path:
        mt_out = _sibling_path(sc.output_path, "_mt")
        mt_out.parent.mkdir(parents=True, exist_ok=True)
        mt.write_csv(mt_out)
    return {"mt": mt, "trajectories": trajectories, "band_ok": band_ok}
