"""JSON interchange: algebra/character specs, matrices, reports.

Emission is deterministic (sorted keys, fixed numeric forms) and exact scalars
round-trip losslessly: real rationals as "p/q" strings, other exact values as
{"u": [re, im], "v": [re, im], "d": "p/q"} meaning u + v*sqrt(d), floats as
JSON numbers, complex floats as {"re": ..., "im": ...}.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

import numpy as np

from .algebra import (
    GradedAlgebraSpec,
    RationalFunction,
    custom_spec,
    dynamical_spec,
    group_algebra_spec,
    quantum_disk_spec,
    su2_spec,
    su11_spec,
    virasoro_density_spec,
    weyl_spec,
)
from .characters import (
    DynOrbit,
    FiniteGroupCharacter,
    PeriodicExtensionCharacter,
    Sl2Character,
    dyn_classify,
    dyn_extend_orbit,
)
from .groups import GroupSpec, Subgroup
from .induction import InducedRep
from .matrices import OperatorMatrix
from .scalars import Scalar


class SchemaError(ValueError):
    """Spec-file violation with a JSON-path diagnostic."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


# ---------------------------------------------------------------------------
# scalars and labels
# ---------------------------------------------------------------------------


def parse_fraction(v, path: str) -> Fraction:
    try:
        if isinstance(v, bool):
            raise ValueError
        if isinstance(v, (int, str)):
            return Fraction(v)
    except (ValueError, ZeroDivisionError):
        pass
    raise SchemaError(path, f"expected an exact rational 'p/q', got {v!r}")


def parse_scalar(v, path: str = "value") -> Scalar:
    if isinstance(v, bool):
        raise SchemaError(path, "booleans are not scalars")
    if isinstance(v, (int, str)):
        return Scalar.rational(parse_fraction(v, path))
    if isinstance(v, float):
        return Scalar.from_float(v)
    if isinstance(v, dict):
        if {"re", "im"} <= set(v):
            return Scalar.from_float(complex(float(v["re"]), float(v["im"])))
        if {"u", "v", "d"} <= set(v):
            u = [parse_fraction(x, f"{path}.u") for x in v["u"]]
            w = [parse_fraction(x, f"{path}.v") for x in v["v"]]
            d = parse_fraction(v["d"], f"{path}.d")
            try:
                return Scalar((u[0], u[1]), (w[0], w[1]), d)
            except (ValueError, IndexError) as exc:
                raise SchemaError(path, str(exc)) from exc
    raise SchemaError(path, f"unrecognized scalar form {v!r}")


def scalar_json(s: Scalar):
    if s.exact:
        if s.is_rational():
            return str(s.as_fraction())
        return {
            "u": [str(s.u[0]), str(s.u[1])],
            "v": [str(s.v[0]), str(s.v[1])],
            "d": str(s.d),
        }
    z = s.approx
    if z.imag == 0:
        return z.real
    return {"re": z.real, "im": z.imag}


def label_json(label):
    if isinstance(label, bool):
        raise TypeError("boolean basis label")
    if isinstance(label, int):
        return label
    if isinstance(label, Fraction):
        return str(label)
    if isinstance(label, tuple):
        return [label_json(x) for x in label]
    raise TypeError(f"unsupported basis label {label!r}")


def parse_label(v, path: str = "label"):
    if isinstance(v, bool):
        raise SchemaError(path, "boolean basis label")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return parse_fraction(v, path)
    if isinstance(v, list):
        return tuple(parse_label(x, path) for x in v)
    raise SchemaError(path, f"unsupported basis label {v!r}")


def jsonable(obj):
    """Best-effort conversion of report payloads to JSON-compatible data."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Scalar):
        return scalar_json(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return [jsonable(x) for x in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.complexfloating):
        return jsonable(complex(obj))
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = list(obj)
        if isinstance(obj, (set, frozenset)):
            items = sorted(items, key=repr)
        return [jsonable(x) for x in items]
    if isinstance(obj, dict):
        return {_key_str(k): jsonable(v) for k, v in sorted(obj.items(), key=lambda kv: _key_str(kv[0]))}
    return repr(obj)


def _key_str(k) -> str:
    if isinstance(k, str):
        return k
    return json.dumps(jsonable(k), sort_keys=True)


# ---------------------------------------------------------------------------
# algebra specs
# ---------------------------------------------------------------------------


def _rational_function(data: dict, path: str) -> RationalFunction:
    if "f_num" not in data:
        raise SchemaError(f"{path}.f_num", "missing recursion numerator")
    num = [parse_fraction(x, f"{path}.f_num[{i}]") for i, x in enumerate(data["f_num"])]
    den = [parse_fraction(x, f"{path}.f_den[{i}]") for i, x in enumerate(data.get("f_den", ["1"]))]
    try:
        return RationalFunction(num, den)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{path}.f_den", str(exc)) from exc


def _parse_group(data, path: str) -> GroupSpec:
    if not isinstance(data, dict) or "kind" not in data:
        raise SchemaError(path, "group needs a 'kind'")
    if data["kind"] == "free_abelian":
        rank = data.get("rank", 1)
        if not isinstance(rank, int) or rank < 1:
            raise SchemaError(f"{path}.rank", "rank must be a positive integer")
        return GroupSpec("free_abelian", rank=rank)
    if data["kind"] == "finite":
        table = data.get("table")
        if not isinstance(table, list) or not table:
            raise SchemaError(f"{path}.table", "finite group needs a Cayley table")
        try:
            return GroupSpec("finite", table=tuple(tuple(row) for row in table))
        except ValueError as exc:
            raise SchemaError(f"{path}.table", str(exc)) from exc
    raise SchemaError(f"{path}.kind", f"unknown group kind {data['kind']!r}")


def load_algebra_spec(data) -> GradedAlgebraSpec:
    """Validate and build an algebra description from parsed JSON."""
    if not isinstance(data, dict):
        raise SchemaError("$", "algebra spec must be a JSON object")
    family = data.get("family")
    if family == "weyl":
        return weyl_spec()
    if family == "dynamical":
        return dynamical_spec(_rational_function(data, "$"))
    if family == "quantum_disk":
        mu = parse_fraction(data.get("mu", 0), "$.mu")
        q = parse_fraction(data.get("q", 1), "$.q")
        try:
            return quantum_disk_spec(mu, q)
        except ValueError as exc:
            raise SchemaError("$.mu", str(exc)) from exc
    if family == "su2":
        return su2_spec()
    if family == "su11":
        return su11_spec()
    if family == "virasoro_density":
        k = data.get("k_range", 5)
        if not isinstance(k, int) or k < 1:
            raise SchemaError("$.k_range", "k_range must be a positive integer")
        return virasoro_density_spec(k)
    if family == "group_algebra":
        G = _parse_group(data.get("group"), "$.group")
        gens = data.get("subgroup")
        if not isinstance(gens, list):
            raise SchemaError("$.subgroup", "subgroup generator list required")
        try:
            H = Subgroup(G, tuple(gens))
            return group_algebra_spec(G, H)
        except ValueError as exc:
            raise SchemaError("$.subgroup", str(exc)) from exc
    if family == "custom":
        gens = data.get("generators")
        if not isinstance(gens, list) or not gens:
            raise SchemaError("$.generators", "generator list required")
        generators = {}
        for i, g in enumerate(gens):
            if not isinstance(g, dict) or "name" not in g or "degree" not in g:
                raise SchemaError(f"$.generators[{i}]", "need 'name' and 'degree'")
            if g["name"] in generators:
                raise SchemaError(f"$.generators[{i}].name", "duplicate name")
            deg = g["degree"]
            generators[g["name"]] = tuple(deg) if isinstance(deg, list) else deg
        star = data.get("star_map")
        if not isinstance(star, dict) or set(star) != set(generators):
            raise SchemaError("$.star_map", "star map must cover every generator")
        group = _parse_group(data["group"], "$.group") if "group" in data else None
        spec = custom_spec(generators, star, relations=[], group=group)
        relations = []
        for i, text in enumerate(data.get("relations", [])):
            try:
                p = spec.parse(text)
            except ValueError as exc:
                raise SchemaError(f"$.relations[{i}]", str(exc)) from exc
            homogeneous, _ = spec.check_homogeneity(p)
            if not homogeneous:
                raise SchemaError(f"$.relations[{i}]",
                                  f"relation {text!r} mixes degrees")
            relations.append(p)
        spec.relations = relations
        return spec
    raise SchemaError("$.family", f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# character specs
# ---------------------------------------------------------------------------


def load_character_spec(data, spec: GradedAlgebraSpec | None = None):
    """Build a character object from parsed JSON (and its algebra, if needed)."""
    if not isinstance(data, dict):
        raise SchemaError("$", "character spec must be a JSON object")
    kind = data.get("kind")
    if kind == "dyn":
        if spec is None or "f" not in spec.payload:
            raise SchemaError("$.kind", "dyn characters need a one-ladder algebra spec")
        seed = parse_scalar(data.get("seed", 0), "$.seed")
        back = data.get("back", 50)
        fwd = data.get("fwd", 50)
        branches = data.get("branches", "principal")
        if branches not in ("principal", "all"):
            raise SchemaError("$.branches", "must be 'principal' or 'all'")
        if not isinstance(back, int) or not isinstance(fwd, int) or back < 0 or fwd < 0:
            raise SchemaError("$.back", "step counts must be nonnegative integers")
        orbits = dyn_extend_orbit(spec.payload["f"], seed, back_steps=back,
                                  fwd_steps=fwd, branch_policy=branches)
        return orbits if branches == "all" else orbits[0]
    if kind == "periodic":
        base = dict(data)
        base["kind"] = "dyn"
        orbit = load_character_spec(base, spec)
        z = parse_scalar(data.get("z", 1), "$.z")
        cls = dyn_classify(orbit)
        if cls.kind != "bilateral_periodic":
            raise SchemaError("$.seed", "orbit is not periodic")
        return PeriodicExtensionCharacter(orbit, cls.period, z)
    if kind == "sl2":
        algebra = data.get("algebra")
        if algebra is None and spec is not None:
            algebra = spec.family
        if algebra not in ("su2", "su11"):
            raise SchemaError("$.algebra", "must be 'su2' or 'su11'")
        s = parse_fraction(data.get("s"), "$.s")
        t = parse_fraction(data.get("t"), "$.t")
        return Sl2Character(s, t, algebra)
    if kind == "group":
        if spec is None or spec.family != "group_algebra":
            raise SchemaError("$.kind", "group characters need a group-algebra spec")
        values = data.get("values")
        if not isinstance(values, dict):
            raise SchemaError("$.values", "value map required")
        parsed = {}
        for k, v in values.items():
            try:
                h = int(k)
            except ValueError as exc:
                raise SchemaError(f"$.values.{k}", "keys are element indices") from exc
            parsed[h] = parse_scalar(v, f"$.values.{k}")
        try:
            return FiniteGroupCharacter(spec, parsed)
        except ValueError as exc:
            raise SchemaError("$.values", str(exc)) from exc
    raise SchemaError("$.kind", f"unknown character kind {kind!r}")


# ---------------------------------------------------------------------------
# matrices and representations
# ---------------------------------------------------------------------------


def matrix_triplets(m: OperatorMatrix) -> list:
    order_r = {l: i for i, l in enumerate(m.rows)}
    order_c = {l: i for i, l in enumerate(m.cols)}
    return [
        [label_json(r), label_json(c), scalar_json(v)]
        for (r, c), v in sorted(m.entries.items(),
                                key=lambda kv: (order_r[kv[0][0]], order_c[kv[0][1]]))
    ]


def rep_json(rep: InducedRep) -> dict:
    meta = {}
    for key in ("family", "window", "period", "series", "route", "spin", "k_range"):
        if key in rep.meta:
            meta[key] = jsonable(rep.meta[key])
    if "gen_degrees" in rep.meta:
        meta["gen_degrees"] = {g: jsonable(d) for g, d in rep.meta["gen_degrees"].items()}
    return {
        "basis": [label_json(l) for l in rep.basis],
        "interior": [label_json(l) for l in rep.interior],
        "ops": {g: matrix_triplets(m) for g, m in rep.ops.items()},
        "meta": meta,
    }


def load_rep(data) -> InducedRep:
    if not isinstance(data, dict) or "basis" not in data or "ops" not in data:
        raise SchemaError("$", "representation needs 'basis' and 'ops'")
    basis = tuple(parse_label(v, f"$.basis[{i}]") for i, v in enumerate(data["basis"]))
    interior = tuple(parse_label(v, "$.interior") for v in data.get("interior", data["basis"]))
    ops = {}
    for name, triplets in data["ops"].items():
        entries = {}
        for i, trip in enumerate(triplets):
            if not isinstance(trip, list) or len(trip) != 3:
                raise SchemaError(f"$.ops.{name}[{i}]", "expected [row, col, value]")
            r = parse_label(trip[0], f"$.ops.{name}[{i}][0]")
            c = parse_label(trip[1], f"$.ops.{name}[{i}][1]")
            entries[(r, c)] = parse_scalar(trip[2], f"$.ops.{name}[{i}][2]")
        try:
            ops[name] = OperatorMatrix(basis, basis, entries)
        except KeyError as exc:
            raise SchemaError(f"$.ops.{name}", f"entry label {exc} not in basis") from exc
    meta = {}
    raw_meta = data.get("meta", {})
    for key in ("family", "period", "series", "route"):
        if key in raw_meta:
            meta[key] = raw_meta[key]
    if "window" in raw_meta:
        meta["window"] = tuple(raw_meta["window"])
    if "gen_degrees" in raw_meta:
        meta["gen_degrees"] = {g: parse_label(d, "$.meta.gen_degrees")
                               for g, d in raw_meta["gen_degrees"].items()}
    return InducedRep(spec=None, character=None, basis=basis, ops=ops,
                      interior=interior, meta=meta)


def matrix_market(m: OperatorMatrix) -> str:
    """MatrixMarket coordinate text (1-based indices in basis order)."""
    order_r = {l: i + 1 for i, l in enumerate(m.rows)}
    order_c = {l: i + 1 for i, l in enumerate(m.cols)}
    lines = [
        "%%MatrixMarket matrix coordinate complex general",
        f"{len(m.rows)} {len(m.cols)} {len(m.entries)}",
    ]
    for (r, c), v in sorted(m.entries.items(),
                            key=lambda kv: (order_r[kv[0][0]], order_c[kv[0][1]])):
        z = complex(v)
        lines.append(f"{order_r[r]} {order_c[c]} {z.real!r} {z.imag!r}")
    return "\n".join(lines) + "\n"


def report_json(report) -> dict:
    return {
        "check": report.check,
        "status": report.status,
        "residual": float(report.residual),
        "tolerance": float(report.tolerance),
        "witness": jsonable(report.witness),
    }


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path: str, content: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from exc


def parse_window(text: str) -> tuple:
    """'K:M' half-open integer window."""
    parts = text.split(":")
    if len(parts) != 2:
        raise SchemaError("window", f"expected 'K:M', got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise SchemaError("window", f"expected integers, got {text!r}") from exc
    if hi <= lo:
        raise SchemaError("window", f"empty window {text!r}")
    return lo, hi
