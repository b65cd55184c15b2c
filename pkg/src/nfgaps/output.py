"""Formatting and manifest helpers shared by the file-emitting interfaces.

CSV conventions: '.' decimal separator, no thousands separators, '\n' line
endings, UTF-8, floats at 17 significant digits (value-preserving).
"""
from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path


def fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def write_manifest(out_dir: str | Path, command: str, flags: dict, seed: int,
                   version: str, artifacts: list[str]) -> Path:
    """Run manifest; `started` is the only non-reproducible field."""
    path = Path(out_dir) / "manifest.json"
    payload = {
        "command": command,
        "flags": flags,
        "seed": seed,
        "version": version,
        "started": datetime.now(timezone.utc).isoformat(),
        "artifacts": sorted(artifacts),
    }
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n",
                    encoding="utf-8")
    return path
