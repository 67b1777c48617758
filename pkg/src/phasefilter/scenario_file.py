"""Plain-text scenario files.

Example::

    [grid]
    n = 1280
    extent = 80

    [source]
    kind = gaussian
    q_i = 8
    delta = 0

    [slits]
    d = 4
    q_f = 1

    [elements]
    detector_filter q_d=2.4 center=4
    free_space tau=1

    [planes]
    0 5

    [output]
    directory = out
    formats = tsv

``#`` starts a comment.  Every section may appear once; only ``[source]`` is
required.
"""

from __future__ import annotations

import math

from .optics import ELEMENT_KINDS, Element
from .scenarios import SOURCE_KINDS, GridSpec, OutputSpec, ScenarioSpec, Source

__all__ = ["ScenarioParseError", "parse_scenario", "print_scenario", "read_scenario"]

SECTIONS = ("grid", "source", "slits", "elements", "planes", "output")
_KEYS = {
    "grid": ("n", "extent"),
    "slits": ("d", "q_f"),
    "output": ("directory", "formats"),
}
_POSITIVE = {"n", "extent", "q_i", "q_f", "K", "q_d", "width"}
_NONNEG = {"d"}
# an infinite beam width or focal parameter is a meaningful limit
_MAY_BE_INF = {"q_i", "K"}
_TEXT = {"kind", "directory", "formats", "representation"}
FORMATS = ("tsv",)


class ScenarioParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _number(text: str, key: str, line: int) -> float:
    try:
        val = float(text)
    except ValueError:
        raise ScenarioParseError(f"{key} must be a number, got {text!r}", line) from None
    if math.isnan(val) or (math.isinf(val) and not (key in _MAY_BE_INF and val > 0)):
        raise ScenarioParseError(f"{key} must be finite, got {text!r}", line)
    if key in _POSITIVE and not val > 0:
        raise ScenarioParseError(f"{key} must be positive, got {text}", line)
    if key in _NONNEG and val < 0:
        raise ScenarioParseError(f"{key} must be non-negative, got {text}", line)
    return val


def _key_value(body: str, line: int) -> tuple[str, str]:
    if "=" not in body:
        raise ScenarioParseError(f"expected 'key = value', got {body!r}", line)
    key, _, value = body.partition("=")
    key, value = key.strip(), value.strip()
    if not key or not value:
        raise ScenarioParseError(f"expected 'key = value', got {body!r}", line)
    return key, value


def _parse_element(body: str, line: int) -> Element:
    kind, *fields = body.split()
    if kind not in ELEMENT_KINDS:
        raise ScenarioParseError(f"unknown element {kind!r} (known: {', '.join(ELEMENT_KINDS)})", line)
    params = {}
    for item in fields:
        key, value = _key_value(item, line)
        if key not in ELEMENT_KINDS[kind]:
            raise ScenarioParseError(f"{kind} does not take {key!r}", line)
        if key in params:
            raise ScenarioParseError(f"{key} given twice", line)
        params[key] = value if key in _TEXT else _number(value, key, line)
    try:
        return Element(kind, params)
    except ValueError as exc:
        raise ScenarioParseError(str(exc), line) from None


def parse_scenario(text: str) -> ScenarioSpec:
    """Parse scenario text into a fully resolved :class:`ScenarioSpec`."""
    sections: dict[str, tuple[int, list]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.startswith("["):
            if not body.endswith("]"):
                raise ScenarioParseError(f"malformed section header {body!r}", lineno)
            name = body[1:-1].strip()
            if name not in SECTIONS:
                raise ScenarioParseError(f"unknown section [{name}]", lineno)
            if name in sections:
                raise ScenarioParseError(f"section [{name}] appears twice (first at line {sections[name][0]})", lineno)
            sections[name] = (lineno, [])
            current = name
            continue
        if current is None:
            raise ScenarioParseError("content before the first section header", lineno)
        sections[current][1].append((lineno, body))

    if "source" not in sections:
        raise ScenarioParseError("missing [source] section")

    def keyed(name):
        head, lines = sections.get(name, (None, []))
        out = {}
        for lineno, body in lines:
            key, value = _key_value(body, lineno)
            allowed = _KEYS.get(name)
            if name == "source":
                kind = out.get("kind", (None, None))[0]
                allowed = ("kind",) + SOURCE_KINDS.get(kind, ())
            if key not in allowed:
                raise ScenarioParseError(f"unknown key {key!r} in [{name}]", lineno)
            if key in out:
                raise ScenarioParseError(f"{key} given twice in [{name}]", lineno)
            out[key] = (value, lineno)
        return head, out

    # grid
    head, kv = keyed("grid")
    grid = GridSpec()
    if kv:
        n_text, n_line = kv.get("n", (str(grid.n), head))
        try:
            n = int(n_text)
        except ValueError:
            raise ScenarioParseError(f"n must be an integer, got {n_text!r}", n_line) from None
        if n < 4 or n % 2:
            raise ScenarioParseError(f"n must be even and >= 4, got {n}", n_line)
        extent = _number(kv["extent"][0], "extent", kv["extent"][1]) if "extent" in kv else grid.extent
        grid = GridSpec(n, extent)

    # source
    head, kv = keyed("source")
    if "kind" not in kv:
        raise ScenarioParseError("[source] needs 'kind' as its first key", head)
    kind, kind_line = kv.pop("kind")
    if kind not in SOURCE_KINDS:
        raise ScenarioParseError(f"unknown source kind {kind!r}", kind_line)
    params = {key: _number(value, key, lineno) for key, (value, lineno) in kv.items()}
    try:
        source = Source(kind, params)
    except ValueError as exc:
        raise ScenarioParseError(str(exc), head) from None

    # slits
    slits = None
    if "slits" in sections:
        head, kv = keyed("slits")
        for key in ("d", "q_f"):
            if key not in kv:
                raise ScenarioParseError(f"[slits] needs {key}", head)
        slits = tuple(_number(kv[key][0], key, kv[key][1]) for key in ("d", "q_f"))

    elements = tuple(_parse_element(body, lineno) for lineno, body in sections.get("elements", (None, []))[1])

    planes = (0.0,)
    if "planes" in sections:
        head, lines = sections["planes"]
        values = []
        for lineno, body in lines:
            values.extend(_number(tok, "plane", lineno) for tok in body.replace(",", " ").split())
        if not values:
            raise ScenarioParseError("[planes] is empty", head)
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ScenarioParseError("planes must be listed in ascending order without repeats", head)
        planes = tuple(values)

    output = OutputSpec()
    if "output" in sections:
        head, kv = keyed("output")
        directory = kv["directory"][0] if "directory" in kv else None
        formats = output.formats
        if "formats" in kv:
            formats = tuple(f.strip() for f in kv["formats"][0].split(",") if f.strip())
            for fmt in formats:
                if fmt not in FORMATS:
                    raise ScenarioParseError(f"unsupported output format {fmt!r}", kv["formats"][1])
        output = OutputSpec(directory, formats)

    try:
        return ScenarioSpec(source=source, slits=slits, elements=elements, planes=planes, grid=grid, output=output)
    except ValueError as exc:
        raise ScenarioParseError(str(exc)) from None


def _fmt(val) -> str:
    if isinstance(val, str):
        return val
    if isinstance(val, int):
        return str(val)
    return repr(float(val))


def print_scenario(spec: ScenarioSpec) -> str:
    """Canonical text for ``spec``; ``parse_scenario(print_scenario(s)) == s``."""
    out = ["[grid]", f"n = {spec.grid.n}", f"extent = {_fmt(spec.grid.extent)}", "", "[source]"]
    out.append(f"kind = {spec.source.kind}")
    for key in SOURCE_KINDS[spec.source.kind]:
        out.append(f"{key} = {_fmt(spec.source.params[key])}")
    if spec.slits is not None:
        out += ["", "[slits]", f"d = {_fmt(spec.slits[0])}", f"q_f = {_fmt(spec.slits[1])}"]
    if spec.elements:
        out += ["", "[elements]"]
        for el in spec.elements:
            fields = " ".join(f"{k}={_fmt(v)}" for k, v in el.params.items())
            out.append(f"{el.kind} {fields}".rstrip())
    out += ["", "[planes]", " ".join(_fmt(t) for t in spec.planes)]
    out += ["", "[output]"]
    if spec.output.directory is not None:
        out.append(f"directory = {spec.output.directory}")
    out.append(f"formats = {','.join(spec.output.formats)}")
    return "\n".join(out) + "\n"


def read_scenario(path) -> ScenarioSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())
