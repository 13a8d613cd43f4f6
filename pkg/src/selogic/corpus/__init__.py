"""Bundled example machines, one ``.2rm`` file each."""

from __future__ import annotations

from importlib.resources import files

from ..minsky import Configuration, Machine, parse_machine


def corpus_names() -> list[str]:
    root = files(__package__)
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".2rm"))


def load_corpus(name: str) -> tuple[Machine, Configuration]:
    path = files(__package__) / f"{name}.2rm"
    if not path.is_file():
        raise FileNotFoundError(f"no bundled machine named {name!r}")
    return parse_machine(path.read_text(), filename=f"{name}.2rm")
