"""Text format for curvature tensors.

::

    format_version: 1
    m: 2
    signature: +-
    entries:
    0 2 2 0 1
    0 2 0 2 -1
    ...

Entries are ``i j k l value`` with 0-based indices into ``e_0..e_{m-1}, f_0..f_{m-1}``
and exact rational values (``p/q`` or an integer).  Omitted entries are zero.
Emission is canonical: lexicographic entry order, reduced rationals with a
positive denominator, zeros omitted.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .curvature import CurvatureTensor
from .errors import ParseError
from .linalg import Space, parse_signature

FORMAT_VERSION = 1
HEADER_FIELDS = ("format_version", "m", "signature")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not an exact rational: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def loads(text: str) -> CurvatureTensor:
    header: dict[str, str] = {}
    header_lines: dict[str, int] = {}
    entries: dict[tuple[int, int, int, int], Fraction] = {}
    in_entries = False
    space = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not in_entries:
            key, sep, value = line.partition(":")
            key = key.strip()
            if not sep:
                raise ParseError("expected 'key: value'", line=lineno)
            if key == "entries":
                if value.strip():
                    raise ParseError("entries must start on the next line", line=lineno, field="entries")
                space = _space_from_header(header, header_lines)
                in_entries = True
                continue
            if key not in HEADER_FIELDS:
                raise ParseError("unknown header field", line=lineno, field=key)
            if key in header:
                raise ParseError("duplicate header field", line=lineno, field=key)
            header[key] = value.strip()
            header_lines[key] = lineno
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ParseError("entry must be 'i j k l value'", line=lineno, field="entries")
        try:
            idx = tuple(int(p) for p in parts[:4])
        except ValueError:
            raise ParseError("indices must be integers", line=lineno, field="entries") from None
        if any(not 0 <= i < space.dim for i in idx):
            raise ParseError(f"index out of range 0..{space.dim - 1}", line=lineno, field="entries")
        if idx in entries:
            raise ParseError(f"duplicate entry {idx}", line=lineno, field="entries")
        try:
            entries[idx] = parse_rational(parts[4])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, field="value") from None
    if not in_entries:
        raise ParseError("missing 'entries:' section", field="entries")
    return CurvatureTensor.from_entries(space, {k: v for k, v in entries.items() if v})


def _space_from_header(header: dict[str, str], lines: dict[str, int]) -> Space:
    for key in HEADER_FIELDS:
        if key not in header:
            raise ParseError("missing header field", field=key)
    try:
        version = int(header["format_version"])
    except ValueError:
        raise ParseError("not an integer", line=lines["format_version"], field="format_version") from None
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format version {version}", line=lines["format_version"], field="format_version")
    try:
        m = int(header["m"])
    except ValueError:
        raise ParseError("not an integer", line=lines["m"], field="m") from None
    if m < 1:
        raise ParseError("m must be >= 1", line=lines["m"], field="m")
    try:
        eps = parse_signature(header["signature"])
    except ValueError as exc:
        raise ParseError(str(exc), line=lines["signature"], field="signature") from None
    if len(eps) != m:
        raise ParseError(f"signature length {len(eps)} does not match m = {m}", line=lines["signature"], field="signature")
    return Space(m, eps)


def dumps(R: CurvatureTensor) -> str:
    space = R.space
    lines = [
        f"format_version: {FORMAT_VERSION}",
        f"m: {space.m}",
        f"signature: {space.signature}",
        "entries:",
    ]
    for (i, j, k, l), v in sorted(R.entries().items()):
        lines.append(f"{i} {j} {k} {l} {format_rational(v)}")
    return "\n".join(lines) + "\n"


def load(path) -> CurvatureTensor:
    return loads(Path(path).read_text(encoding="utf-8"))


def dump(R: CurvatureTensor, path) -> None:
    Path(path).write_text(dumps(R), encoding="utf-8")
