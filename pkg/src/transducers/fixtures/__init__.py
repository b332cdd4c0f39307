"""Bundled machine and expression files.

fig1  comment stripper (sequential)      fig4  copyful register increment
fig2left  lsb-first increment (1DFT)     fig5  copyless register increment
fig2right msb-first increment (NFT)      *.rte expression sources
fig3  msb-first increment (two-way)
"""
from __future__ import annotations

from importlib import resources

FIXTURE_NAMES = (
    "fig1.json",
    "fig2left.json",
    "fig2right.json",
    "fig3.json",
    "fig4.json",
    "fig5.json",
    "increment.rte",
    "ambiguous.rte",
    "duplicate.rte",
    "exchange.rte",
    "hchain.rte",
    "chain2h.rte",
)


def fixture_path(name: str):
    """Filesystem path of a bundled fixture."""
    path = resources.files(__package__) / name
    if not path.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")
