"""Bit-exact readers and writers for every file the CLI produces or consumes.

Writers are deterministic (fixed key order, ``\\n`` line endings, trailing
newline), so write -> read -> write reproduces the same bytes. Readers reject
anything outside the documented grammar with :class:`FormatError`.
The grammar is frozen in docs/FORMATS.md.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .errors import FormatError, MuwmError
from .matrixcore import FamilyParams, MatrixFamily, WeighingMatrix, verify_weighing
from .spherical import CrossPolytopeDecomposition, SphericalCode

CERTIFICATE_KINDS = ("family-verify", "decomposition", "lp-bound", "count-bound",
                     "exhaustion", "pipeline")


def _lines(text: str) -> list[str]:
    if not text.endswith("\n"):
        raise FormatError("file must end with a newline")
    return text[:-1].split("\n")


def _ints(line: str, where: str) -> list[int]:
    try:
        return [int(t) for t in line.split(" ")]
    except ValueError:
        raise FormatError(f"{where}: expected space-separated integers, got {line!r}") from None


def _check_canonical(line: str, values: Sequence[int], where: str) -> None:
    if line != " ".join(str(v) for v in values):
        raise FormatError(f"{where}: non-canonical spacing or integer form in {line!r}")


def dumps_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def _loads_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{what}: invalid JSON ({exc})") from None


# -- single matrix -----------------------------------------------------------

def write_matrix(W: WeighingMatrix | np.ndarray, weight: int | None = None) -> str:
    A = np.asarray(W.entries if isinstance(W, WeighingMatrix) else W)
    k = W.weight if isinstance(W, WeighingMatrix) else weight
    if k is None:
        k = int(np.count_nonzero(A[0]))
    out = [f"{A.shape[0]} {k}"]
    out += [" ".join(str(int(x)) for x in row) for row in A]
    return "\n".join(out) + "\n"


def read_matrix(text: str) -> WeighingMatrix:
    lines = _lines(text)
    head = _ints(lines[0], "header")
    if len(head) != 2:
        raise FormatError("matrix header must be 'd k'")
    _check_canonical(lines[0], head, "header")
    d, k = head
    if len(lines) != d + 1:
        raise FormatError(f"expected {d} rows, found {len(lines) - 1}")
    rows = []
    for i, line in enumerate(lines[1:], 1):
        row = _ints(line, f"row {i}")
        _check_canonical(line, row, f"row {i}")
        if len(row) != d:
            raise FormatError(f"row {i} has {len(row)} entries, expected {d}")
        if any(x not in (-1, 0, 1) for x in row):
            raise FormatError(f"row {i} has an entry outside {{-1,0,1}}")
        rows.append(row)
    W = verify_weighing(rows)
    if W.weight != k:
        raise FormatError(f"header weight {k} but rows have weight {W.weight}")
    return W


# -- family ------------------------------------------------------------------

def family_to_obj(family: MatrixFamily) -> dict:
    p = family.params
    return {"params": {"d": p.d, "k": p.k, "l": p.l, "a": p.a},
            "matrices": [W.tolist() for W in family.members]}


def write_family(family: MatrixFamily) -> str:
    p = family.params
    head = f'{{"params":{{"d":{p.d},"k":{p.k},"l":{p.l},"a":{p.a}}},"matrices":['
    mats = []
    for W in family.members:
        rows = ",".join("[" + ",".join(str(int(x)) for x in row) + "]" for row in W.entries)
        mats.append("[" + rows + "]")
    return head + ",\n".join(mats) + "]}\n"


def read_family(text: str, check: bool = True) -> MatrixFamily:
    """Parse a family file. Members are validated as weighing matrices; the
    pairwise invariants are left to :func:`verify_family`."""
    obj = _loads_json(text, "family")
    if not isinstance(obj, dict) or set(obj) != {"params", "matrices"}:
        raise FormatError("family must be an object with exactly 'params' and 'matrices'")
    par = obj["params"]
    if not isinstance(par, dict) or set(par) != {"d", "k", "l", "a"}:
        raise FormatError("params must have exactly d, k, l, a")
    if not all(type(par[x]) is int for x in "dkla"):
        raise FormatError("params must be integers")
    params = FamilyParams(par["d"], par["k"], par["l"], par["a"])
    mats = obj["matrices"]
    if not isinstance(mats, list):
        raise FormatError("matrices must be a list")
    members = []
    for t, M in enumerate(mats):
        if (not isinstance(M, list) or len(M) != params.d
                or any(not isinstance(r, list) or len(r) != params.d for r in M)):
            raise FormatError(f"matrix {t} is not {params.d}x{params.d}")
        if any(type(x) is not int or x not in (-1, 0, 1) for r in M for x in r):
            raise FormatError(f"matrix {t} has an entry outside {{-1,0,1}}")
        members.append(verify_weighing(M) if check else WeighingMatrix(np.array(M), params.k))
    return MatrixFamily(params, tuple(members))


# -- spherical code and decomposition ---------------------------------------

def write_code(code: SphericalCode) -> str:
    V = code.vectors
    out = [f"{V.shape[1]} {code.norm_sq} {V.shape[0]}"]
    out += [" ".join(str(int(x)) for x in v) for v in V]
    return "\n".join(out) + "\n"


def read_code(text: str) -> SphericalCode:
    lines = _lines(text)
    head = _ints(lines[0], "header")
    if len(head) != 3:
        raise FormatError("code header must be 'n N count'")
    _check_canonical(lines[0], head, "header")
    n, N, count = head
    if len(lines) != count + 1:
        raise FormatError(f"expected {count} vectors, found {len(lines) - 1}")
    vecs = []
    for i, line in enumerate(lines[1:], 1):
        v = _ints(line, f"vector {i}")
        _check_canonical(line, v, f"vector {i}")
        if len(v) != n:
            raise FormatError(f"vector {i} has length {len(v)}, expected {n}")
        vecs.append(v)
    code = SphericalCode.from_vectors(vecs)
    if count and code.norm_sq != N:
        raise FormatError(f"header norm {N} but vectors have squared norm {code.norm_sq}")
    return code


def write_decomposition(dec: CrossPolytopeDecomposition) -> str:
    parts = ",".join("[" + ",".join(str(int(i)) for i in p) + "]" for p in dec.parts)
    return f'{{"frame_size":{dec.frame_size},"parts":[{parts}]}}\n'


def read_decomposition(text: str, code: SphericalCode) -> CrossPolytopeDecomposition:
    obj = _loads_json(text, "decomposition")
    if not isinstance(obj, dict) or set(obj) != {"frame_size", "parts"}:
        raise FormatError("decomposition must have exactly 'frame_size' and 'parts'")
    r, parts = obj["frame_size"], obj["parts"]
    if type(r) is not int or not isinstance(parts, list):
        raise FormatError("bad decomposition field types")
    if any(not isinstance(p, list) or any(type(i) is not int for i in p) for p in parts):
        raise FormatError("parts must be lists of integer indices")
    return CrossPolytopeDecomposition(code, tuple(tuple(p) for p in parts), r).validate()


# -- linear code dumps --------------------------------------------------------

def write_binary_code(code) -> str:
    from .bincode import word_to_bits
    out = [f"binary {code.length} {code.dimension}"]
    out += ["".join(str(b) for b in word_to_bits(g, code.length)) for g in code.generators]
    return "\n".join(out) + "\n"


def read_binary_code(text: str):
    from .bincode import BinaryCode
    lines = _lines(text)
    head = lines[0].split(" ")
    if len(head) != 3 or head[0] != "binary":
        raise FormatError("binary dump header must be 'binary n dimension'")
    n, k = _ints(" ".join(head[1:]), "header")
    _check_canonical(lines[0], ["binary", n, k], "header")
    rows = lines[1:]
    if len(rows) != k:
        raise FormatError(f"expected {k} generator rows, found {len(rows)}")
    bits = []
    for i, r in enumerate(rows, 1):
        if len(r) != n or set(r) - {"0", "1"}:
            raise FormatError(f"generator {i} is not a 0/1 string of length {n}")
        bits.append([int(c) for c in r])
    code = BinaryCode.from_rows(n, bits)
    if code.dimension != k:
        raise FormatError(f"generators span dimension {code.dimension}, header says {k}")
    return code


def write_z4_code(code) -> str:
    out = [f"z4 {code.length} {code.k1} {code.k2}"]
    out += ["".join(str(int(x)) for x in g) for g in code.generators]
    return "\n".join(out) + "\n"


def read_z4_code(text: str):
    from .z4code import Z4Code
    lines = _lines(text)
    head = lines[0].split(" ")
    if len(head) != 4 or head[0] != "z4":
        raise FormatError("z4 dump header must be 'z4 n k1 k2'")
    n, k1, k2 = _ints(" ".join(head[1:]), "header")
    _check_canonical(lines[0], ["z4", n, k1, k2], "header")
    rows = lines[1:]
    if len(rows) != k1 + k2:
        raise FormatError(f"expected {k1 + k2} generator rows, found {len(rows)}")
    vecs = []
    for i, r in enumerate(rows, 1):
        if len(r) != n or set(r) - set("0123"):
            raise FormatError(f"generator {i} is not a string over 0-3 of length {n}")
        vecs.append([int(c) for c in r])
    arr = np.array(vecs, dtype=np.int64).reshape(len(vecs), n)
    code = Z4Code(n, arr[:k1], arr[k1:])
    ref = Z4Code.from_rows(n, vecs)
    if (ref.k1, ref.k2) != (k1, k2):
        raise FormatError(f"generators have type 4^{ref.k1} 2^{ref.k2}, header says "
                          f"4^{k1} 2^{k2}")
    return code


# -- certificates ---------------------------------------------------------------

def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def file_digest(path: str | Path) -> str:
    return sha256_bytes(Path(path).read_bytes())


def make_certificate(kind: str, payload: dict, inputs: dict[str, str] | None = None) -> dict:
    if kind not in CERTIFICATE_KINDS:
        raise FormatError(f"unknown certificate kind {kind!r}")
    return {"kind": kind, "inputs": dict(sorted((inputs or {}).items())),
            "payload": payload, "tool_version": __version__}


def write_certificate(cert: dict) -> str:
    return dumps_json(cert)


def read_certificate(text: str) -> dict:
    obj = _loads_json(text, "certificate")
    if not isinstance(obj, dict) or set(obj) != {"kind", "inputs", "payload", "tool_version"}:
        raise FormatError("certificate must have exactly kind, inputs, payload, tool_version")
    if obj["kind"] not in CERTIFICATE_KINDS:
        raise FormatError(f"unknown certificate kind {obj['kind']!r}")
    return obj


def save(path: str | Path, text: str) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return p


def load(path: str | Path) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


def error_payload(exc: MuwmError) -> dict:
    return {"error": exc.name, "message": str(exc), "exit_code": exc.exit_code}
