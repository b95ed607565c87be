"""Benchmark programs shipped with the package."""

from __future__ import annotations

from pathlib import Path

DIRECTORY = Path(__file__).parent

# template degree used for each benchmark; everything else uses 2
DEGREES = {"product2": 3, "product2S": 3, "cubeS": 3}

# solver runs measured in minutes rather than milliseconds
SLOW = frozenset({"product2", "product2S", "cubeS"})


def names() -> list[str]:
    return sorted(p.stem for p in DIRECTORY.glob("*.lasso"))


def path(name: str) -> Path:
    p = DIRECTORY / f"{name}.lasso"
    if not p.exists():
        raise FileNotFoundError(f"no corpus program named {name!r}")
    return p


def degree(name: str) -> int:
    return DEGREES.get(name, 2)


def load(name: str):
    from ..program import parse_file
    return parse_file(path(name))
