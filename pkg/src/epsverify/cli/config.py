"""Key-value configuration files mirroring the command-line flags."""

from __future__ import annotations

import configparser
from pathlib import Path

SECTION = "epsverify"


def load_config(path: str | Path) -> dict[str, str]:
    """Read ``key = value`` lines (``#`` comments allowed; a section header is optional).

    Keys are normalised so that ``tower-degree`` and ``tower_degree`` coincide.
    """
    text = Path(path).read_text()
    parser = configparser.ConfigParser(interpolation=None)
    if not text.lstrip().startswith("["):
        text = f"[{SECTION}]\n" + text
    parser.read_string(text)
    out: dict[str, str] = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            out[key.replace("-", "_")] = value.strip()
    return out
