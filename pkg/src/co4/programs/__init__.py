"""Example constraint programs shipped with the package."""

from pathlib import Path

DIR = Path(__file__).parent


def path(name):
    """Absolute path of a bundled program or data file, as a string."""
    p = DIR / name
    if not p.exists():
        raise FileNotFoundError(f"no bundled program {name!r}")
    return str(p)
