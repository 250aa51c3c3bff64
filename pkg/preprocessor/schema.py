import json
from dataclasses import dataclass
from pathlib import Path

from jsonschema import Draft202012Validator

from model.errors import SchemaError, suggest

SCHEMA_PATH = Path(__file__).resolve().parent.parent / "data" / "schema" / "graph.schema.json"

with open(SCHEMA_PATH, encoding="utf-8") as f:
    GRAPH_SCHEMA = json.load(f)

VALIDATOR = Draft202012Validator(GRAPH_SCHEMA)


@dataclass(frozen=True)
class GraphDescription:
    """A schema-valid graph document and where it came from."""

    document: dict
    source: str = None


def field_name(path):
    """["actors", 2, "kind"] -> "actors[2].kind"."""
    name = ""
    for part in path:
        if isinstance(part, int):
            name += f"[{part}]"
        else:
            name += f".{part}" if name else part
    return name or "<document>"


def _explain(error):
    message = error.message
    if error.validator == "enum":
        message += suggest(error.instance, error.validator_value)
    elif error.validator == "additionalProperties":
        allowed = error.schema.get("properties", {})
        unexpected = [key for key in error.instance if key not in allowed]
        if unexpected:
            message += suggest(unexpected[0], allowed)
    return message


def validate_document(document):
    """Raise SchemaError naming the first offending field, in document order."""
    errors = sorted(VALIDATOR.iter_errors(document),
                    key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        error = errors[0]
        raise SchemaError(field_name(error.absolute_path), _explain(error))
    return document
