"""Front end: parsing, pattern desugaring, instantiation, type checking."""

from .desugar import desugar
from .instantiate import instantiate
from .parser import parse, parse_file
from .typecheck import typecheck


def compile_program(text, path=None, max_specializations=100):
    """Source text to a checked first-order monomorphic core program."""
    core = instantiate(desugar(parse(text, path)), max_specializations)
    typecheck(core)
    return core


def compile_file(path, max_specializations=100):
    with open(path, encoding="utf-8") as fh:
        return compile_program(fh.read(), str(path), max_specializations)
