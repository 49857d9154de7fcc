"""Rendering of run reports as JSON or plain-text tables."""

import hashlib
import json
from typing import Any, Dict, List

from ..models.schemas import RunReport


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)


def inputs_digest(data: Dict[str, Any]) -> str:
    """sha256 of the canonical JSON form of the inputs."""
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def render_json(report: RunReport) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2)


def _flatten(prefix: str, value: Any, rows: List[str]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], rows)
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        for i, item in enumerate(value):
            _flatten(f"{prefix}[{i}]", item, rows)
    else:
        rendered = ", ".join(str(v) for v in value) if isinstance(value, list) else str(value)
        rows.append(f"{prefix}: {rendered}")


def render_table(report: RunReport) -> str:
    """Human-readable key: value listing of a report."""
    data = report.model_dump(mode="json")
    lines = [
        f"command: {' '.join(data['command'])}",
        f"status:  {data['status']}",
        f"digest:  {data['inputs_digest']}",
        "",
    ]
    rows: List[str] = []
    _flatten("", data["results"], rows)
    lines.extend(rows)
    if data["provenance"]:
        lines.append("")
        prov: List[str] = []
        _flatten("provenance", data["provenance"], prov)
        lines.extend(prov)
    return "\n".join(lines)
