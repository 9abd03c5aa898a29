import runpy
from pathlib import Path

import pytest

DEMOS = sorted((Path(__file__).parent.parent / "demos").glob("*.py"))


@pytest.mark.parametrize("script", DEMOS, ids=lambda p: p.stem)
def test_demo_runs(script, capsys):
    runpy.run_path(str(script), run_name="__main__")
    assert capsys.readouterr().out.strip()


def test_bundled_program_lookup():
    from co4.programs import path

    assert path("double.co4").endswith("double.co4")
    with pytest.raises(FileNotFoundError):
        path("nope.co4")
