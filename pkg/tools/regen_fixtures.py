#!/usr/bin/env python3
"""Regenerate the bundled fixture files from their programmatic builders."""
from pathlib import Path

from transducers import bundled
from transducers.serialization import save_machine

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "transducers" / "fixtures"


def main() -> None:
    for name, build in bundled.machine_builders().items():
        save_machine(build(), FIXTURES / name)
        print(f"wrote {name}")
    for name, text in bundled.EXPRESSION_TEXTS.items():
        (FIXTURES / name).write_text(text, encoding="utf-8")
        print(f"wrote {name}")


if __name__ == "__main__":
    main()
