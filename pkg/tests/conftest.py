from __future__ import annotations

from functools import lru_cache

import pytest

from eprim import PermGroup, parse_cycles
from eprim.catalog import load_group, load_lattice
from eprim.cosetgraph import Graph, build_from_lattice

# lines printed by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def perm(text: str, degree: int):
    return parse_cycles(text, degree)


def group(degree: int, *texts: str) -> PermGroup:
    return PermGroup([perm(t, degree) for t in texts], degree)


def sym(n: int) -> PermGroup:
    return group(n, "(" + ",".join(map(str, range(1, n + 1))) + ")", "(1,2)")


def alt(n: int) -> PermGroup:
    return PermGroup([perm(f"(1,2,{k})", n) for k in range(3, n + 1)], n)


def cyclic(n: int) -> PermGroup:
    return group(n, "(" + ",".join(map(str, range(1, n + 1))) + ")")


@lru_cache(maxsize=None)
def lattice(name: str):
    return load_lattice(name)


@lru_cache(maxsize=None)
def lattice_graph(name: str) -> Graph:
    return build_from_lattice(lattice(name))


@lru_cache(maxsize=None)
def catalog_group(name: str) -> PermGroup:
    return load_group(name)[0]


A6_ROWS = [f"a6_row{i:02d}" for i in range(1, 12)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def tmp_catalog(tmp_path, monkeypatch):
    """A writable copy of the shipped corpus, selected through CATALOG_DIR."""
    import shutil

    from eprim.catalog import catalog_dir

    dst = tmp_path / "catalog"
    shutil.copytree(catalog_dir(), dst)
    monkeypatch.setenv("CATALOG_DIR", str(dst))
    return dst
