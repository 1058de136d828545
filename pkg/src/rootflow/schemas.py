"""Published JSON schemas for every report and input format (version rootflow/1)."""

from __future__ import annotations

SCHEMA_VERSION = "rootflow/1"

_COMPLEX_PAIR = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}

POLY_SCHEMA = {
    "type": "object",
    "required": ["coeffs"],
    "properties": {"coeffs": {"type": "array", "items": _COMPLEX_PAIR, "minItems": 1}},
}

HYPERSCALAR_SCHEMA = {
    "type": "object",
    "required": ["terms", "order"],
    "properties": {
        "terms": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "number"},
                "minItems": 4,
                "maxItems": 4,
            },
        },
        "order": {
            "type": "array",
            "items": {"type": "integer"},
            "minItems": 2,
            "maxItems": 2,
        },
    },
}

DEFORMATION_SCHEMA = {
    "type": "object",
    "required": ["base", "kind", "paths"],
    "properties": {
        "base": POLY_SCHEMA,
        "kind": {"enum": ["linear", "series"]},
        "paths": {"type": "array", "minItems": 1},
    },
}

_ALIGNMENT = {
    "type": "object",
    "required": ["pairs", "distances", "max_distance", "method"],
    "properties": {
        "pairs": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "integer"},
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "distances": {"type": "array", "items": {"type": "number"}},
        "max_distance": {"type": "number"},
        "method": {"enum": ["deflation", "bottleneck"]},
    },
}

ROOTS_REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema", "kind", "degree", "roots", "residual_bound"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "kind": {"const": "roots"},
        "degree": {"type": "integer", "minimum": 1},
        "roots": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["root", "multiplicity", "radius"],
                "properties": {
                    "root": _COMPLEX_PAIR,
                    "multiplicity": {"type": "integer", "minimum": 1},
                    "radius": {"type": "number", "minimum": 0},
                },
            },
        },
        "residual_bound": {"type": "number"},
        "verify": {
            "type": "object",
            "required": ["oracle_max_deviation", "oracle_roots"],
            "properties": {
                "oracle_max_deviation": {"type": "number"},
                "oracle_roots": {"type": "array", "items": _COMPLEX_PAIR},
            },
        },
    },
}

ALIGN_REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema", "kind", "deflation", "bottleneck", "agreement"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "kind": {"const": "align"},
        "deflation": _ALIGNMENT,
        "bottleneck": _ALIGNMENT,
        "agreement": {"type": "boolean"},
    },
}

LEMMA_REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema", "kind", "claim", "passed", "items"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "kind": {"const": "lemma"},
        "claim": {"enum": ["lemma1", "lemma2"]},
        "passed": {"type": "boolean"},
        "items": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "passed", "informational"],
                "properties": {
                    "name": {"type": "string"},
                    "passed": {"type": "boolean"},
                    "informational": {"type": "boolean"},
                    "tolerance": {"type": ["number", "null"]},
                    "witness": {"type": ["object", "null"]},
                    "detail": {"type": "string"},
                },
            },
        },
    },
}

CONTINUITY_REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema", "kind", "seed", "samples", "slope", "points"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "kind": {"const": "continuity"},
        "seed": {"type": "integer"},
        "samples": {"type": "integer"},
        "slope": {"type": ["number", "null"]},
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["epsilon", "status"],
                "properties": {
                    "epsilon": {"type": "number"},
                    "status": {"enum": ["ok", "saturated", "failed"]},
                    "delta": {"type": "number"},
                    "distance_at_delta": {"type": "number"},
                    "witness": {"type": "array", "items": _COMPLEX_PAIR},
                    "samples": {"type": "integer"},
                    "seed": {"type": "integer"},
                    "clamped": {"type": "boolean"},
                    "soundness": {"type": ["object", "null"]},
                    "error": {"type": "string"},
                },
            },
        },
    },
}

REPORT_SCHEMAS = {
    "roots": ROOTS_REPORT_SCHEMA,
    "align": ALIGN_REPORT_SCHEMA,
    "lemma": LEMMA_REPORT_SCHEMA,
    "continuity": CONTINUITY_REPORT_SCHEMA,
}

CSV_COLUMNS = (
    "epsilon",
    "delta",
    "distance_at_delta",
    "witness_json",
    "samples",
    "seed",
    "status",
)


def validate_report(report: dict) -> None:
    """Validate a report against its published schema (requires jsonschema)."""
    try:
        import jsonschema
    except ImportError as exc:  # pragma: no cover
        raise ImportError("schema validation requires the jsonschema package") from exc
    kind = report.get("kind")
    if kind not in REPORT_SCHEMAS:
        raise ValueError(f"unknown report kind {kind!r}")
    jsonschema.validate(report, REPORT_SCHEMAS[kind])
