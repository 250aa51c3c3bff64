import json
import logging
from pathlib import Path

from model.errors import ParseError, SchemaError
from preprocessor.schema import GraphDescription, validate_document

logger = logging.getLogger(__name__)


def _load_payload_file(fifo, base, field):
    path = (base / fifo["delay_payload_file"]).resolve()
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise SchemaError(field, f"cannot read delay payload file: {exc}") from None
    width = fifo.get("token_bytes", 4)
    expected = fifo.get("delay", 0) * width
    if len(raw) != expected:
        raise SchemaError(field, f"delay payload file holds {len(raw)} bytes, expected "
                                 f"{expected}")
    return [raw[i:i + width].hex() for i in range(0, len(raw), width)]


def parse_graph_text(text, source=None, base=None):
    if not text.strip():
        raise ParseError("empty graph file", source=source)
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, source) from None
    try:
        validate_document(document)
    except SchemaError as exc:
        raise SchemaError(exc.field, exc.detail, source) from None
    base = Path(base) if base else Path.cwd()
    for index, fifo in enumerate(document.get("fifos", [])):
        if "delay_payload_file" in fifo:
            field = f"fifos[{index}].delay_payload_file"
            fifo["delay_payloads"] = _load_payload_file(fifo, base, field)
            del fifo["delay_payload_file"]
    for actor in document.get("actors", []):
        path = actor.get("params", {}).get("path")
        if actor.get("behavior") == "file" and isinstance(path, str):
            actor["params"]["path"] = str((base / path).resolve())
    return GraphDescription(document, source)


def parse_graph_file(path):
    """Read and schema-check a JSON graph file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read graph file: {exc.strerror}", source=str(path)) from None
    description = parse_graph_text(text, str(path), path.parent)
    logger.debug("parsed %s: %d actors, %d fifos", path, len(description.document["actors"]),
                 len(description.document["fifos"]))
    return description


def serialize_graph(graph):
    """Graph back to the file document shape; rebuilding it yields an equal Graph."""
    actors = []
    for actor in graph.actors:
        ports = []
        for port in actor.ports:
            doc = {"id": port.id, "kind": port.kind.value}
            if not port.is_control:
                doc["direction"] = port.direction.value
                doc["atr"] = port.atr
            if port.control_len:
                doc["control_len"] = port.control_len
            ports.append(doc)
        doc = {"id": actor.id, "kind": actor.kind.value, "behavior": actor.behavior,
               "ports": ports}
        if actor.params:
            doc["params"] = dict(actor.params)
        actors.append(doc)
    fifos = []
    for fifo in graph.fifos:
        doc = {"id": fifo.id, "src": fifo.src, "dst": fifo.dst, "rate": fifo.rate,
               "delay": fifo.delay, "token_bytes": fifo.token_bytes}
        if fifo.delay_payloads:
            doc["delay_payloads"] = [p.hex() for p in fifo.delay_payloads]
        fifos.append(doc)
    control = [{"port": port, "drp": drp, "element": element}
               for (port, drp), element in sorted(graph.control_table.entries.items())]
    return {"name": graph.name, "actors": actors, "fifos": fifos, "control": control}


def write_graph_file(graph, path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(serialize_graph(graph), f, indent=2)
        f.write("\n")
