"""Reading and writing group files (JSON, schema version 1).

Layout::

    {
      "schema_version": 1,
      "torus": {"n": 2, "J": [["0", "-1", ...], ...]},
      "generators": [{"matrix": [[1, 0, ...], ...], "translation": ["1/3", "0", ...]}],
      "metadata": {"translation_mode": "torus"}
    }

Rationals are strings ``"p/q"`` so that no float ever enters.  Translations
are optional per generator.  ``metadata.translation_mode`` is ``"torus"``
(translations act modulo the lattice, the default) or ``"lattice"``
(translations in the covering affine group, as for abstract affine groups).
"""

import json
from fractions import Fraction

from .errors import ParseError
from .groups import AffineGroupPresentation, MatrixGroupPresentation
from .hodge import TorusModel
from .linalg import ExactMatrix

SCHEMA_VERSION = 1
TRANSLATION_MODES = ("torus", "lattice")


class GroupFile:
    """Parsed contents of a group file."""

    def __init__(self, torus, matrices, translations=None, metadata=None):
        self.torus = torus
        self.matrices = list(matrices)
        self.translations = list(translations) if translations is not None else [None] * len(self.matrices)
        self.metadata = dict(metadata or {})

    @property
    def n(self):
        return self.torus.n

    @property
    def translation_mode(self):
        return self.metadata.get("translation_mode", "torus")

    @property
    def has_translations(self):
        return any(t is not None and any(t) for t in self.translations)

    def group(self):
        """Linear presentation, or an affine one when some translation is nonzero."""
        d = 2 * self.n
        if not self.has_translations:
            return MatrixGroupPresentation(self.matrices, d)
        gens = [(m, t if t is not None else [0] * d) for m, t in zip(self.matrices, self.translations)]
        return AffineGroupPresentation(d, gens, torus=self.translation_mode == "torus")

    def __eq__(self, other):
        return (isinstance(other, GroupFile) and self.torus == other.torus and self.matrices == other.matrices
                and self._tr() == other._tr() and self.metadata == other.metadata)

    def _tr(self):
        return [tuple(t) if t is not None else None for t in self.translations]


def _rational(x, path, issues):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        issues.append({"path": path, "invariant": "rational", "message": "expected a rational string p/q"})
        return None
    try:
        return Fraction(x.strip()) if isinstance(x, str) else Fraction(x)
    except (ValueError, ZeroDivisionError):
        issues.append({"path": path, "invariant": "rational", "message": f"cannot parse {x!r} as a rational"})
        return None


def _square(rows, d, path, issues, convert):
    if not isinstance(rows, list) or len(rows) != d or any(not isinstance(r, list) or len(r) != d for r in rows):
        issues.append({"path": path, "invariant": "shape", "message": f"expected a {d}x{d} array"})
        return None
    out = []
    ok = True
    for i, r in enumerate(rows):
        row = []
        for j, x in enumerate(r):
            v = convert(x, f"{path}[{i}][{j}]", issues)
            ok = ok and v is not None
            row.append(v)
        out.append(row)
    return ExactMatrix(out) if ok else None


def _integer(x, path, issues):
    if isinstance(x, bool) or not isinstance(x, int):
        issues.append({"path": path, "invariant": "integrality", "message": "matrix entries must be JSON integers"})
        return None
    return x


def parse_groupfile(data):
    """Validate a decoded JSON object; raises :class:`ParseError` listing every issue found."""
    issues = []
    if not isinstance(data, dict):
        raise ParseError("group file must be a JSON object", [{"path": "", "invariant": "schema",
                                                               "message": "top level is not an object"}])
    if data.get("schema_version") != SCHEMA_VERSION:
        issues.append({"path": "schema_version", "invariant": "schema",
                       "message": f"schema_version must be {SCHEMA_VERSION}"})
    extra = set(data) - {"schema_version", "torus", "generators", "metadata"}
    if extra:
        issues.append({"path": "", "invariant": "schema", "message": f"unknown keys {sorted(extra)}"})
    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict) or any(not isinstance(k, str) or not isinstance(v, str)
                                             for k, v in metadata.items()):
        issues.append({"path": "metadata", "invariant": "schema", "message": "metadata must map strings to strings"})
        metadata = {}
    if metadata.get("translation_mode", "torus") not in TRANSLATION_MODES:
        issues.append({"path": "metadata.translation_mode", "invariant": "schema",
                       "message": f"translation_mode must be one of {list(TRANSLATION_MODES)}"})
    torus_data = data.get("torus")
    torus = None
    n = None
    if not isinstance(torus_data, dict):
        issues.append({"path": "torus", "invariant": "schema", "message": "missing torus object"})
    else:
        n = torus_data.get("n")
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            issues.append({"path": "torus.n", "invariant": "schema", "message": "n must be a positive integer"})
            n = None
        else:
            J = _square(torus_data.get("J"), 2 * n, "torus.J", issues, _rational)
            if J is not None:
                if J @ J != -ExactMatrix.identity(2 * n):
                    issues.append({"path": "torus.J", "invariant": "J^2=-I", "message": "J does not square to -I"})
                else:
                    torus = TorusModel(n, J)
    gens = data.get("generators")
    matrices, translations = [], []
    if not isinstance(gens, list):
        issues.append({"path": "generators", "invariant": "schema", "message": "generators must be a list"})
        gens = []
    for k, g in enumerate(gens):
        path = f"generators[{k}]"
        if not isinstance(g, dict) or "matrix" not in g or set(g) - {"matrix", "translation"}:
            issues.append({"path": path, "invariant": "schema",
                           "message": "generator must have 'matrix' and optionally 'translation'"})
            continue
        if n is None:
            continue
        M = _square(g["matrix"], 2 * n, path + ".matrix", issues, _integer)
        t = None
        if "translation" in g:
            tr = g["translation"]
            if not isinstance(tr, list) or len(tr) != 2 * n:
                issues.append({"path": path + ".translation", "invariant": "shape",
                               "message": f"translation must have {2 * n} entries"})
            else:
                t = [_rational(x, f"{path}.translation[{i}]", issues) for i, x in enumerate(tr)]
                if any(x is None for x in t):
                    t = None
        if M is None:
            continue
        if abs(M.det()) != 1:
            issues.append({"path": path + ".matrix", "invariant": "unimodularity", "generator": k,
                           "message": "determinant is not +-1"})
        if torus is not None and M @ torus.J != torus.J @ M:
            issues.append({"path": path + ".matrix", "invariant": "MJ=JM", "generator": k,
                           "message": "matrix does not commute with J"})
        matrices.append(M)
        translations.append(t)
    if issues:
        raise ParseError(f"{len(issues)} problem(s) in group file", issues)
    return GroupFile(torus, matrices, translations, metadata)


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("invalid JSON", [{"path": "", "invariant": "json", "message": str(exc)}]) from None
    return parse_groupfile(data)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def _q(x):
    return str(Fraction(x))


def to_data(gf):
    d = 2 * gf.n
    gens = []
    for M, t in zip(gf.matrices, gf.translations):
        entry = {"matrix": [[int(M[i, j]) for j in range(d)] for i in range(d)]}
        if t is not None:
            entry["translation"] = [_q(x) for x in t]
        gens.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "torus": {"n": gf.n, "J": [[_q(gf.torus.J[i, j]) for j in range(d)] for i in range(d)]},
        "generators": gens,
        "metadata": dict(gf.metadata),
    }


def dumps(gf):
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_data(gf), indent=2, sort_keys=True) + "\n"


def dump(gf, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(gf))


def from_case(case):
    """Group file for a gallery case.

    Abstract affine groups on ``Z^k`` are placed on ``E_i^k`` by ``A -> A (x) I_2``
    and ``b -> b (x) (1, 0)`` with lattice-mode translations.
    """
    meta = {k: str(v) for k, v in case.params.items()}
    meta.update(case.metadata)
    meta["case"] = case.name
    if case.torus is None:
        k = case.group.linear_dim
        torus = TorusModel.square(k)
        mats, trs = [], []
        for g in case.group.generators:
            mats.append(g.A.kron(ExactMatrix.identity(2)))
            trs.append([x for b in g.b for x in (b, Fraction(0))])
        meta["translation_mode"] = "lattice"
        return GroupFile(torus, mats, trs, meta)
    if case.is_affine:
        meta["translation_mode"] = "torus" if case.group.torus else "lattice"
        return GroupFile(case.torus, [g.A for g in case.group.generators],
                         [list(g.b) for g in case.group.generators], meta)
    return GroupFile(case.torus, list(case.group.generators), None, meta)
