"""Hand transcriptions shipped as data files.

Each file holds ``#`` comment lines and ``name = gauss code`` entries.
"""

from __future__ import annotations

from importlib import resources

from .diagram import PseudoDiagram, parse_gauss


def names() -> list[str]:
    return sorted(p.name[:-4] for p in resources.files(__package__).joinpath("data").iterdir()
                  if p.name.endswith(".txt"))


def entries(name: str) -> dict[str, str]:
    text = resources.files(__package__).joinpath("data", f"{name}.txt").read_text()
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, code = line.partition("=")
        out[key.strip()] = code.strip()
    return out


def load(name: str, entry: str | None = None) -> PseudoDiagram:
    """The named entry of a data file, or its only/first entry."""
    found = entries(name)
    if entry is None:
        entry = next(iter(found))
    return parse_gauss(found[entry])
