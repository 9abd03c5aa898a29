import re
from dataclasses import dataclass

from ..errors import ParseError

KEYWORDS = {"data", "type", "case", "of", "let", "in"}
SYMBOLS = ("::", "->", "=", "|", "(", ")", "{", "}", ";", ",", "_")

_SPEC = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>--[^\n]*)
  | (?P<bcomment>\{-)
  | (?P<upper>[A-Z][A-Za-z0-9_']*)
  | (?P<lower>[a-z_][A-Za-z0-9_']*)
  | (?P<sym>::|->|[=|(){};,])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str  # lower, upper, kw, sym, eof
    value: str
    line: int
    col: int
    bol: bool = False  # first token on its line

    @property
    def loc(self):
        return (self.line, self.col)

    def __str__(self):
        return "end of input" if self.kind == "eof" else repr(self.value)


def tokenize(text, path=None):
    tokens = []
    pos = 0
    line, line_start = 1, 0
    bol = True
    n = len(text)
    while pos < n:
        m = _SPEC.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", (line, pos - line_start + 1), path)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
            bol = True
        elif kind == "bcomment":
            depth, p = 1, m.end()
            while depth and p < n:
                if text.startswith("{-", p):
                    depth, p = depth + 1, p + 2
                elif text.startswith("-}", p):
                    depth, p = depth - 1, p + 2
                else:
                    if text[p] == "\n":
                        line += 1
                        line_start = p + 1
                        bol = True
                    p += 1
            if depth:
                raise ParseError("unterminated block comment", (line, p - line_start + 1), path)
            pos = p
            continue
        elif kind in ("upper", "lower", "sym"):
            value = m.group()
            if kind == "lower" and value in KEYWORDS:
                kind = "kw"
            elif kind == "lower" and value == "_":
                kind = "sym"
            tokens.append(Token(kind, value, line, m.start() - line_start + 1, bol))
            bol = False
        pos = m.end()
    tokens.append(Token("eof", "", line + 1, 0, True))
    return tokens
