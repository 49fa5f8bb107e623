"""Plain-text manifold spec files (``.mfd``).

Grammar::

    file      := { line }
    line      := blank | comment | section | entry | row
    comment   := "#" text
    section   := "[" NAME "]"
    entry     := KEY "=" VALUE                 (header, sampling, certification)
    row       := EXPR { "," EXPR }             (tensor blocks)

Sections:

``[header]``
    ``name``, ``kind`` (``acm`` or ``apcm``), ``dimension``,
    ``coordinates`` (comma separated names) and ``domain``
    (``lo hi`` pairs separated by ``;``, one per coordinate).
``[phi] [xi] [eta] [g]`` or ``[psi] [zeta] [tau] [g]``
    Components as expressions.  Matrices (``phi``, ``psi``, ``g``) take one
    row per line with row index = upper index for the affinor; vectors and
    one-forms take a single row.
``[sampling]`` (optional)
    ``seed``, ``points`` and ``tol``.
``[certification]`` (optional)
    Free ``key = value`` records written by the example emitters.

Errors raise :class:`SpecFileError` carrying the 1-based line and column.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .calculus import ChartManifold, TensorField
from .exprlang import ExprSyntaxError, to_string

KINDS = {
    "acm": ("phi", "xi", "eta", "g"),
    "apcm": ("psi", "zeta", "tau", "g"),
}
_VALENCE = {0: (1, 1), 1: (1, 0), 2: (0, 1), 3: (0, 2)}


class SpecFileError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, path: str = ""):
        self.message, self.line, self.column, self.path = message, line, column, path
        where = f"{path or '<spec>'}:{line}:{column}" if line else (path or "<spec>")
        super().__init__(f"{where}: {message}")


@dataclass
class ManifoldSpec:
    name: str
    kind: str
    chart: ChartManifold
    tensors: dict  # field name -> TensorField
    seed: int = 42
    points: int = 100
    tol: float | None = None
    certification: dict = field(default_factory=dict)
    source: str = ""

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.source.encode("utf-8")).hexdigest()

    def structure(self):
        a, r, f, g = (self.tensors[k] for k in KINDS[self.kind])
        if self.kind == "acm":
            from .acm import ACMStructure
            return ACMStructure(self.chart, a, r, f, g, self.name)
        from .apcm import APCMStructure
        return APCMStructure(self.chart, a, r, f, g, self.name)


def _split_entries(text: str, start_col: int):
    """Split a row on top-level commas, yielding ``(entry, column)``."""
    depth, begin = 0, 0
    for i, ch in enumerate(text + ","):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            raw = text[begin:i]
            stripped = raw.lstrip()
            yield stripped.rstrip(), start_col + begin + (len(raw) - len(stripped))
            begin = i + 1


def _kv(line: str, lineno: int, path: str):
    if "=" not in line:
        raise SpecFileError("expected 'key = value'", lineno, 1, path)
    k, v = line.split("=", 1)
    return k.strip().lower(), v.strip()


def loads(text: str, path: str = "") -> ManifoldSpec:
    sections: dict = {}
    order: list = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        stripped = body.strip()
        col = len(body) - len(body.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise SpecFileError("unterminated section header", lineno, col, path)
            current = stripped[1:-1].strip().lower()
            if current in sections:
                raise SpecFileError(f"duplicate section [{current}]", lineno, col, path)
            sections[current] = []
            order.append((current, lineno))
            continue
        if current is None:
            raise SpecFileError("content before the first section", lineno, col, path)
        sections[current].append((lineno, col, body.strip()))

    if "header" not in sections:
        raise SpecFileError("missing [header] section", 0, 0, path)
    header = {}
    header_lines = {}
    for lineno, col, line in sections["header"]:
        k, v = _kv(line, lineno, path)
        header[k] = v
        header_lines[k] = lineno
    for key in ("kind", "dimension", "coordinates"):
        if key not in header:
            raise SpecFileError(f"header is missing '{key}'", 0, 0, path)
    kind = header["kind"].lower()
    if kind not in KINDS:
        raise SpecFileError(f"unknown kind {header['kind']!r} (expected acm or apcm)",
                            header_lines["kind"], 1, path)
    try:
        dim = int(header["dimension"])
    except ValueError:
        raise SpecFileError("dimension must be an integer", header_lines["dimension"], 1, path) from None
    names = tuple(s.strip() for s in header["coordinates"].split(","))
    if len(names) != dim:
        raise SpecFileError(f"expected {dim} coordinate names, got {len(names)}",
                            header_lines["coordinates"], 1, path)
    if "domain" in header:
        parts = [p.split() for p in header["domain"].split(";")]
        try:
            lo = tuple(float(p[0]) for p in parts)
            hi = tuple(float(p[1]) for p in parts)
        except (ValueError, IndexError):
            raise SpecFileError("domain must be 'lo hi; lo hi; ...'", header_lines["domain"], 1, path) from None
        if len(lo) != dim:
            raise SpecFileError(f"domain needs {dim} intervals, got {len(lo)}", header_lines["domain"], 1, path)
    else:
        lo, hi = (-1.0,) * dim, (1.0,) * dim
    try:
        chart = ChartManifold(dim, names, lo, hi)
    except ValueError as exc:
        raise SpecFileError(str(exc), header_lines.get("domain", header_lines["coordinates"]), 1, path) from None

    tensors = {}
    for idx, key in enumerate(KINDS[kind]):
        if key not in sections:
            raise SpecFileError(f"missing [{key}] section for kind {kind}", 0, 0, path)
        rows = sections[key]
        valence = _VALENCE[idx]
        want_rows = dim if sum(valence) == 2 else 1
        sec_line = dict(order)[key]
        if len(rows) != want_rows:
            raise SpecFileError(f"[{key}] needs {want_rows} row(s) of {dim} entries, got {len(rows)} row(s)",
                                rows[-1][0] if rows else sec_line, 1, path)
        comps = np.empty((want_rows, dim), dtype=object)
        for r, (lineno, col, line) in enumerate(rows):
            entries = list(_split_entries(line, col))
            if len(entries) != dim:
                raise SpecFileError(f"[{key}] row has {len(entries)} entries, expected {dim}", lineno, col, path)
            for c, (entry, ecol) in enumerate(entries):
                try:
                    comps[r, c] = chart.parse(entry)
                except ExprSyntaxError as exc:
                    raise SpecFileError(f"[{key}] {exc.message}", lineno, ecol + exc.offset, path) from None
        if want_rows == 1:
            comps = comps[0]
        tensors[key] = TensorField(chart, valence, comps)

    spec = ManifoldSpec(header.get("name", "unnamed"), kind, chart, tensors, source=text)
    for lineno, col, line in sections.get("sampling", []):
        k, v = _kv(line, lineno, path)
        try:
            if k == "seed":
                spec.seed = int(v)
            elif k == "points":
                spec.points = int(v)
            elif k == "tol":
                spec.tol = float(v)
            else:
                raise SpecFileError(f"unknown sampling key {k!r}", lineno, col, path)
        except ValueError:
            raise SpecFileError(f"bad value for {k}: {v!r}", lineno, col, path) from None
    for lineno, col, line in sections.get("certification", []):
        k, v = _kv(line, lineno, path)
        spec.certification[k] = v
    known = {"header", "sampling", "certification", *KINDS[kind]}
    for sec, lineno in order:
        if sec not in known:
            raise SpecFileError(f"unknown section [{sec}]", lineno, 1, path)
    return spec


def load(path) -> ManifoldSpec:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), str(path))


def dumps(S, seed: int = 42, points: int = 100, tol: float | None = None,
          certification: dict | None = None, comment: str = "") -> str:
    """Render a structure whose fields are expression tensors."""
    chart = S.chart
    keys = KINDS[S.kind]
    lines = []
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines += ["[header]", f"name = {S.name}", f"kind = {S.kind}", f"dimension = {chart.dim}",
              f"coordinates = {', '.join(chart.coord_names)}",
              "domain = " + "; ".join(f"{a:g} {b:g}" for a, b in zip(chart.lo, chart.hi)), ""]
    for key in keys:
        fld = getattr(S, key)
        if not isinstance(fld, TensorField):
            raise TypeError(f"{key} is not an expression field and cannot be written")
        comps = fld.components
        rows = comps if comps.ndim == 2 else comps[None, :]
        lines.append(f"[{key}]")
        lines += [", ".join(to_string(e) for e in row) for row in rows]
        lines.append("")
    lines += ["[sampling]", f"seed = {seed}", f"points = {points}"]
    if tol is not None:
        lines.append(f"tol = {tol:g}")
    if certification:
        lines += ["", "[certification]"]
        lines += [f"{k} = {v}" for k, v in certification.items()]
    return "\n".join(lines) + "\n"


def dump(S, path, **kwargs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(S, **kwargs))
