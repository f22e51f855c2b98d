"""Bundled benchmark programs.

Apart from ``running`` and ``filter`` these are reconstructions written
from one-line descriptions of the original benchmarks, not the originals.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Dict, Optional


def load(directory: Optional[str] = None) -> Dict[str, str]:
    """Map program name (file stem) to source, sorted by name."""
    if directory is not None:
        files = {p.stem: p.read_text() for p in Path(directory).glob("*.prog")}
    else:
        root = resources.files(__name__)
        files = {Path(e.name).stem: e.read_text() for e in root.iterdir()
                 if e.name.endswith(".prog")}
    return dict(sorted(files.items()))
