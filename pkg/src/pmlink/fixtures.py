"""Bundled example data, addressed by name (``d4``, ``x2``, ``cusp_d5``...)."""

from __future__ import annotations

from importlib import resources

from .formats import parse_divisor, parse_factorization, parse_graph

_KINDS = {"graph": parse_graph, "div": parse_divisor, "fact": parse_factorization}


def _text(name: str, ext: str) -> str:
    path = resources.files(__package__).joinpath("fixtures", f"{name}.{ext}")
    if not path.is_file():
        raise KeyError(f"no fixture {name}.{ext}; known: {', '.join(names(ext))}")
    return path.read_text(encoding="utf-8")


def names(ext: str = "graph") -> list[str]:
    folder = resources.files(__package__).joinpath("fixtures")
    return sorted(p.name.rsplit(".", 1)[0] for p in folder.iterdir() if p.name.endswith("." + ext))


def graph(name: str):
    return parse_graph(_text(name, "graph"))


def divisor(name: str) -> dict:
    return parse_divisor(_text(name, "div"))


def factorization(name: str):
    return parse_factorization(_text(name, "fact"))


def text(name: str, ext: str = "graph") -> str:
    return _text(name, ext)
