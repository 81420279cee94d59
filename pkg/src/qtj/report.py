"""Report envelopes, schema validation and canonical JSON/CSV emission.

Numbers leave the package as strings: binary floats in fixed scientific
form at the decimal width of their precision, exact values as ``p/q`` or
``quad:a:b:c:d``.  Canonical JSON uses sorted keys and no whitespace
variation, so equal payloads always hash to the same digest.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import platform
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import metadata
from pathlib import Path
from typing import Any

import gmpy2
import jsonschema

from .errors import IoFailure, SchemaViolation
from .numerics import BigComplex, GaussianRational, QuadComplex, QuadIrr, exact_parts, format_real

SCHEMA_VERSION = 1

NUM = {"type": "string", "pattern": r"^(-?\d(\.\d+)?e[+-]\d+|-?\d+(/\d+)?|0|-?inf|nan|quad:-?\d+:-?\d+:\d+:\d+)$"}
NUM_OR_NULL = {"anyOf": [NUM, {"type": "null"}]}
COMPLEX = {
    "type": "object",
    "required": ["re", "im"],
    "properties": {"re": NUM, "im": NUM},
    "additionalProperties": False,
}
COMPLEX_OR_NULL = {"anyOf": [COMPLEX, {"type": "null"}]}
PREC = {"type": "integer", "minimum": 2}


def _obj(props: dict, required=None) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": sorted(props) if required is None else required,
        "additionalProperties": False,
    }


PAYLOAD_SCHEMAS: dict[str, dict] = {
    "cf": _obj({
        "theta": {"type": "string"},
        "quotients": {"type": "array", "items": {"type": "integer"}},
        "period": {"anyOf": [{"type": "array", "items": {"type": "integer"}}, {"type": "null"}]},
        "terminating": {"type": "boolean"},
        "heuristic": {"type": "boolean"},
        "convergents": {"type": "array", "items": _obj({"m": {"type": "integer"}, "n": {"type": "integer"},
                                                        "err": NUM})},
        "precision": PREC,
    }),
    "eisenstein": _obj({
        "mu": {"type": "string"}, "k": {"type": "integer"}, "set": {"type": "string"},
        "value_re": NUM, "value_im": NUM, "term_count": {"type": "integer"},
        "mode": {"enum": ["exact", "float"]}, "precision": PREC, "error_bound": NUM_OR_NULL,
        "weight": {"type": "integer"}, "flags": {"type": "array", "items": {"type": "string"}},
    }),
    "automorphy": _obj({
        "mu": {"type": "string"}, "k": {"type": "integer"}, "set": {"type": "string"},
        "matrix": {"type": "array", "items": {"type": "integer"}}, "det": {"enum": [1, -1]},
        "residual": COMPLEX, "residual_abs": NUM, "mode": {"enum": ["exact", "float"]},
        "precision": PREC,
    }),
    "jclass": _obj({
        "mu": {"type": "string"}, "reduced_mu": COMPLEX,
        "reducer": {"type": "array", "items": {"type": "integer"}},
        "box_max": {"type": "integer"}, "extrapolation_order": {"type": "integer"},
        "j": COMPLEX, "error_bound": NUM, "g2": COMPLEX, "g3": COMPLEX,
        "flags": {"type": "array", "items": {"type": "string"}}, "precision": PREC,
    }),
    "jquant": _obj({
        "mu": {"type": "string"}, "theta": {"type": "string"}, "window": {"type": "integer"},
        "period": {"anyOf": [{"type": "array", "items": {"type": "integer"}}, {"type": "null"}]},
        "reality_expected": {"type": "boolean"},
        "rows": {"type": "array", "items": _obj({
            "stage": {"type": "integer"}, "q": {"type": "integer"}, "j": COMPLEX_OR_NULL,
            "im_fraction": NUM_OR_NULL, "class": {"type": ["integer", "null"]},
        })},
        "classes": {"type": "array", "items": _obj({
            "class": {"type": ["integer", "null"]}, "stages": {"type": "array", "items": {"type": "integer"}},
            "median": COMPLEX_OR_NULL, "diameter": NUM,
        })},
        "flags": {"type": "array", "items": {"type": "string"}},
        "precision": PREC,
    }),
    "weier-residual": _obj({
        "mu": {"type": "string"}, "z": COMPLEX, "scheme": {"type": "string"},
        "rows": {"type": "array", "items": _obj({
            "stage": {"type": "integer"}, "size": {"type": "integer"}, "residual": NUM,
            "normalized": NUM_OR_NULL,
        })},
        "decay_exponent": {"type": ["number", "null"]},
        "precision": PREC,
    }),
    "orbit": _obj({
        "mu": COMPLEX, "theta": {"type": ["string", "null"]},
        "matrix": {"anyOf": [{"type": "array", "items": {"type": "integer"}}, {"type": "null"}]},
        "image_mu": COMPLEX_OR_NULL, "image_theta": {"type": ["string", "null"]},
        "reduced_mu": COMPLEX, "reducer": {"type": "array", "items": {"type": "integer"}},
        "precision": PREC,
    }),
}

MANIFEST_SCHEMA = _obj({
    "argv": {"type": "array", "items": {"type": "string"}},
    "config": {"type": "object"},
    "precision": PREC,
    "versions": {"type": "object"},
    "input_sha256": {"type": "string"},
    "wall_time_s": {"type": "number"},
    "payload_sha256": {"type": "string"},
})


def envelope_schema(command: str) -> dict:
    return _obj({
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"const": command},
        "payload": PAYLOAD_SCHEMAS[command],
        "manifest": MANIFEST_SCHEMA,
    })


# ---------------------------------------------------------------------------
# value rendering


def num(x, prec: int | None = None) -> str:
    """String form of one real number."""
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, QuadIrr):
        return str(x.to_fraction()) if x.is_rational else x.text()
    if isinstance(x, type(gmpy2.mpfr(0))):
        return format_real(x, prec or x.precision)
    if isinstance(x, float):
        return format_real(gmpy2.mpfr(x), 53)
    raise TypeError(f"cannot render {type(x).__name__}")


def cnum(z, prec: int | None = None) -> dict:
    """{'re': ..., 'im': ...} for exact or BigComplex values."""
    if isinstance(z, BigComplex):
        p = prec or z.prec
        return {"re": format_real(z.real, p), "im": format_real(z.imag, p)}
    if isinstance(z, (GaussianRational, QuadComplex)) or isinstance(z, (int, Fraction, QuadIrr)):
        re, im = exact_parts(z)
        return {"re": num(re), "im": num(im)}
    raise TypeError(f"cannot render {type(z).__name__}")


# ---------------------------------------------------------------------------
# manifest and envelope


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def versions() -> dict:
    from . import __version__

    return {"qtj": __version__, "python": platform.python_version(), "gmpy2": gmpy2.version(),
            "mpfr": gmpy2.mpfr_version(), "jsonschema": metadata.version("jsonschema")}


@dataclass
class RunManifest:
    argv: list[str]
    config: dict
    precision: int
    input_sha256: str = ""
    wall_time_s: float = 0.0
    payload_sha256: str = ""
    versions: dict = field(default_factory=versions)

    def __post_init__(self):
        if not self.input_sha256:
            self.input_sha256 = sha256(canonical_json({"argv": self.argv, "config": self.config}))

    def as_dict(self) -> dict:
        return {"argv": list(self.argv), "config": dict(self.config), "precision": self.precision,
                "versions": dict(self.versions), "input_sha256": self.input_sha256,
                "wall_time_s": self.wall_time_s, "payload_sha256": self.payload_sha256}


@dataclass
class ReportEnvelope:
    command: str
    payload: dict
    manifest: RunManifest
    schema_version: int = SCHEMA_VERSION

    def as_dict(self) -> dict:
        return {"schema_version": self.schema_version, "command": self.command,
                "payload": self.payload, "manifest": self.manifest.as_dict()}

    def validate(self) -> None:
        if self.command not in PAYLOAD_SCHEMAS:
            raise SchemaViolation(f"no schema for command {self.command!r}")
        try:
            jsonschema.validate(self.as_dict(), envelope_schema(self.command))
        except jsonschema.ValidationError as exc:
            path = "/".join(str(p) for p in exc.absolute_path)
            raise SchemaViolation(f"payload invalid at {path or '<root>'}: {exc.message}") from None


# ---------------------------------------------------------------------------
# CSV projection


def _flat(prefix: str, v, out: dict) -> None:
    if isinstance(v, dict):
        for k in sorted(v):
            _flat(f"{prefix}_{k}" if prefix else k, v[k], out)
    elif isinstance(v, list) and not any(isinstance(x, (dict, list)) for x in v):
        out[prefix] = ";".join("" if x is None else str(x) for x in v)
    else:
        out[prefix] = "" if v is None else v


def csv_rows(command: str, payload: dict) -> tuple[list[str], list[dict]]:
    """Header and rows of the flat projection of a payload."""
    if command == "jquant":
        header = ["stage", "re", "im", "im_fraction", "class"]
        rows = [{"stage": r["stage"], "re": r["j"]["re"] if r["j"] else "",
                 "im": r["j"]["im"] if r["j"] else "", "im_fraction": r["im_fraction"] or "",
                 "class": "" if r["class"] is None else r["class"]} for r in payload["rows"]]
        return header, rows
    if command == "weier-residual":
        header = ["stage", "size", "residual", "normalized"]
        return header, [{k: ("" if r[k] is None else r[k]) for k in header} for r in payload["rows"]]
    if command == "cf":
        header = ["index", "quotient", "m", "n", "err"]
        rows = []
        for j, c in enumerate(payload["convergents"]):
            rows.append({"index": j, "quotient": payload["quotients"][j], **c})
        return header, rows
    flat: dict = {}
    _flat("", payload, flat)
    header = sorted(flat)
    return header, [flat]


def render(env: ReportEnvelope, fmt: str) -> str:
    if fmt == "json":
        return canonical_json(env.as_dict()) + "\n"
    if fmt == "csv":
        header, rows = csv_rows(env.command, env.payload)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def emit(env: ReportEnvelope, fmt: str = "json", path: str | Path | None = None) -> str:
    """Validate, serialize and write; returns the payload digest.

    Nothing is written when validation fails.
    """
    env.manifest.payload_sha256 = sha256(canonical_json(env.payload))
    env.validate()
    text = render(env, fmt)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot write {path}: {exc}") from None
    return env.manifest.payload_sha256
