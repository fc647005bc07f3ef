"""``muwm`` command line: construct, verify, decompose, roots, bound, table,
derive-muwm, screen.

Exit codes and file formats are listed in docs/FORMATS.md. Errors go to
stderr as ``error: <Name>: <message>``.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import time
from collections import Counter
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, bounds, formats, lattice, search
from .errors import EXIT_INVALID, EXIT_OK, EXIT_USAGE, MuwmError, SearchTimeout
from .matrixcore import (
    FamilyParams,
    MatrixFamily,
    derive_muwm,
    derive_muwm_with_transpose,
    screen_parameters,
    verify_family,
)
from .spherical import find_decomposition

log = logging.getLogger("muwm")


def _out(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def parse_range(text: str) -> list[int]:
    """``4..17``, ``7`` or ``4,6,8``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use A..B, A or A,B,C") from None


def _write_bundle(out: Path, stem: str, family: MatrixFamily, code=None, dec=None,
                  extra: dict[str, str] | None = None) -> dict[str, Path]:
    paths = {"family": formats.save(out / f"{stem}.family.json", formats.write_family(family))}
    if code is not None:
        paths["code"] = formats.save(out / f"{stem}.code.txt", formats.write_code(code))
    if dec is not None:
        paths["decomposition"] = formats.save(out / f"{stem}.decomposition.json",
                                              formats.write_decomposition(dec))
    for suffix, text in (extra or {}).items():
        paths[suffix] = formats.save(out / f"{stem}.{suffix}", text)
    return paths


def _digests(paths: dict[str, Path]) -> dict[str, str]:
    return {p.name: formats.file_digest(p) for p in paths.values()}


def _inner_product_counts(code) -> dict[int, int]:
    G = code.gram()
    upper = G[np.triu_indices(G.shape[0], 1)]
    return dict(sorted(Counter(upper.tolist()).items()))


def _summary(stem: str, family: MatrixFamily, paths: dict[str, Path], cert_path: Path) -> None:
    _out(f"construction: {stem}")
    _out(f"members: {family.size}")
    _out("params: ({},{},{},{})".format(*family.params.as_tuple()))
    for key, p in paths.items():
        _out(f"{key}: {p}")
    _out(f"certificate: {cert_path}")


# -- construct ---------------------------------------------------------------------

def cmd_construct(args) -> int:
    out = Path(args.out)
    strict = args.strict_inner_products
    t0 = time.perf_counter()
    if args.what == "binary-mquwm":
        from .bincode import binary_pipeline
        res = binary_pipeline(args.m, strict=strict)
        stem = f"binary-mquwm-m{args.m}"
        extra = {"bincode.txt": formats.write_binary_code(res.code),
                 "subcode.txt": formats.write_binary_code(res.subcode)}
        family, code, dec, checks = res.family, res.spherical, res.decomposition, res.checks
    elif args.what == "z4-mquwm":
        from .z4code import gray_nonlinearity_witness, z4_pipeline
        res = z4_pipeline(args.m, strict=strict)
        stem = f"z4-mquwm-m{args.m}"
        extra = {"z4code.txt": formats.write_z4_code(res.code),
                 "subcode.txt": formats.write_z4_code(res.subcode)}
        family, code, dec, checks = res.family, res.spherical, res.decomposition, res.checks
        pair = gray_nonlinearity_witness(res.code)
        checks = dict(checks, gray_image_linear=pair is None,
                      gray_nonlinearity_witness=None if pair is None else [
                          "".join(map(str, pair[0])), "".join(map(str, pair[1]))])
    elif args.what == "d-frames":
        family, code, dec = lattice.d_frames_family(args.d, strict=strict)
        stem = f"d-frames-d{args.d}"
        extra = {}
        checks = {"lattice": f"D{args.d}", "frames": len(dec.parts),
                  "counting_bound": bounds.counting_bound(args.d).family_bound,
                  "inner_products": sorted(_inner_product_counts(code))}
    elif args.what == "weight4":
        res = lattice.weight4_maximum(args.d, lattice=args.lattice, budget=args.node_budget)
        stem = f"weight4-d{args.d}"
        extra = {}
        family = res.family or MatrixFamily(FamilyParams(args.d, 4, 4, 4), ())
        code = dec = None
        if res.frames is not None and res.frames.count:
            code, dec = res.frames.as_code()
        checks = {"lattice": res.lattice, "m": res.m, "frames": res.frames.count if res.frames else 0,
                  "table_value": lattice.weight4_table_value(args.d)[0]}
    else:  # argparse restricts choices
        raise AssertionError(args.what)
    verify_family(family, workers=args.workers)
    checks = dict(checks, family_verified=True)
    paths = _write_bundle(out, stem, family, code, dec, extra)
    payload = {"construction": args.what, "members": family.size,
               "params": list(family.params.as_tuple()), "checks": checks}
    cert = formats.make_certificate("pipeline", payload, _digests(paths))
    cert_path = formats.save(out / f"{stem}.cert.json", formats.write_certificate(cert))
    _summary(stem, family, paths, cert_path)
    log.info("construct %s took %.3fs", stem, time.perf_counter() - t0)
    return EXIT_OK


# -- verify / derive -----------------------------------------------------------------

def cmd_verify(args) -> int:
    text = formats.load(args.family)
    family = formats.read_family(text)
    if args.params:
        family = MatrixFamily(FamilyParams(*args.params), family.members)
    verify_family(family, debug=args.debug, workers=args.workers)
    payload = {"valid": True, "members": family.size,
               "params": list(family.params.as_tuple())}
    cert = formats.make_certificate("family-verify", payload,
                                    {Path(args.family).name: formats.sha256_bytes(text.encode())})
    _out(formats.write_certificate(cert))
    return EXIT_OK


def cmd_derive(args) -> int:
    family = formats.read_family(formats.load(args.family))
    verify_family(family, workers=args.workers)
    derived = (derive_muwm_with_transpose if args.transpose else derive_muwm)(family)
    text = formats.write_family(derived)
    if args.output:
        formats.save(args.output, text)
        _out(f"members: {derived.size}")
        _out("params: ({},{},{},{})".format(*derived.params.as_tuple()))
        _out(f"family: {args.output}")
    else:
        _out(text)
    return EXIT_OK


# -- decompose / roots ---------------------------------------------------------------

def cmd_decompose(args) -> int:
    out = Path(args.out)
    if args.family:
        system = lattice.generate_roots(args.family)
        if args.frame_size is not None and args.frame_size != system.rank:
            raise lattice.BadSpec(f"{system.name} frames have size {system.rank}, "
                                  f"not {args.frame_size}")
        res = lattice.max_disjoint_frames(system, budget=args.node_budget)
        stem = f"{system.name}-frames"
        code_path = formats.save(out / f"{system.name}.code.txt", formats.write_code(system.code()))
        dec_text = ('{"frame_size":%d,"parts":[%s]}\n'
                    % (system.rank, ",".join("[" + ",".join(map(str, f)) + "]"
                                             for f in res.decomposition.frames)))
        dec_path = formats.save(out / f"{stem}.decomposition.json", dec_text)
        kind = "decomposition" if res.count else "exhaustion"
        payload = res.certificate()
        count = res.count
    else:
        code = formats.read_code(formats.load(args.code))
        r = args.frame_size if args.frame_size is not None else code.dimension
        dec = find_decomposition(code, r, budget=args.node_budget)
        stem = Path(args.code).name.split(".")[0] + "-frames"
        code_path = Path(args.code)
        dec_path = formats.save(out / f"{stem}.decomposition.json",
                                formats.write_decomposition(dec))
        kind = "decomposition"
        payload = {"frame_size": r, "parts": len(dec.parts), "vectors": len(code.vectors)}
        count = len(dec.parts)
    cert = formats.make_certificate(kind, payload, _digests({"c": code_path, "d": dec_path}))
    cert_path = formats.save(out / f"{stem}.cert.json", formats.write_certificate(cert))
    _out(f"frames: {count}")
    _out(f"code: {code_path}")
    _out(f"decomposition: {dec_path}")
    _out(f"certificate: {cert_path}")
    return EXIT_OK


def cmd_roots(args) -> int:
    text = formats.write_code(lattice.generate_roots(args.family).code())
    if args.output:
        formats.save(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- bounds / screen ---------------------------------------------------------------

def cmd_bound(args) -> int:
    if args.kind == "lp":
        cert = bounds.verify_lp_certificate(args.d, strict=args.strict_coefficients)
        kind = "lp-bound"
        if cert.mismatches:
            log.warning("computed coefficients %s differ from the printed ones",
                        cert.mismatches)
    else:
        cert = bounds.counting_bound(args.d)
        kind = "count-bound"
    body = cert.to_dict()
    if args.wrap:
        body = formats.make_certificate(kind, body)
    _out(formats.dumps_json(body))
    return EXIT_OK


def cmd_screen(args) -> int:
    res = screen_parameters(args.d, args.k, args.a, args.size)
    _out(formats.dumps_json(res.to_dict()))
    return EXIT_OK


# -- table ---------------------------------------------------------------------------

TABLE_FIELDS = ("d", "m", "table_m", "lattice", "witness", "witness_members",
                "confirmed_m", "best_lattices", "status", "seconds")


def _table_row(d: int, out: Path, budget: int, confirm: bool, workers: int) -> dict:
    expected, _ = lattice.weight4_table_value(d)
    res = lattice.weight4_maximum(d, budget=budget)
    witness = ""
    if res.family is not None and res.family.size:
        verify_family(res.family, workers=workers)
        witness = str(formats.save(out / "witness" / f"weight4-d{d}.family.json",
                                   formats.write_family(res.family)))
    row = {"d": d, "m": res.m, "table_m": expected, "lattice": res.lattice or "-",
           "witness": witness or "-",
           "witness_members": res.family.size if res.family is not None else 0,
           "confirmed_m": "-", "best_lattices": "-",
           "status": "CONSTRUCTED" if res.m == expected else "MISMATCH"}
    if confirm:
        try:
            conf = lattice.confirm_weight4(d, budget=budget)
        except SearchTimeout as exc:
            log.warning("d=%d: confirmation stopped after %d nodes", d, exc.nodes)
            row["status"] = "UNCONFIRMED"
        else:
            # with m = 0 every lattice ties, so listing them says nothing
            best = " ".join(conf.best_lattices) if conf.m else ""
            row.update(confirmed_m=conf.m, best_lattices=best or "-",
                       status="CONFIRMED" if conf.m == res.m == expected else "MISMATCH")
    if row["witness_members"] != res.m:
        row["status"] = "MISMATCH"
    return row


def table_rows(ds: Sequence[int], out: Path, budget: int, confirm: bool = True,
               workers: int = 1) -> list[dict]:
    """One row per order; a search that runs out of budget marks its row UNCONFIRMED."""
    rows = []
    for d in ds:
        t0 = time.perf_counter()
        try:
            row = _table_row(d, out, budget, confirm, workers)
        except SearchTimeout as exc:
            log.warning("d=%d: witness search stopped after %d nodes", d, exc.nodes)
            row = {"d": d, "m": "-", "table_m": lattice.weight4_table_value(d)[0],
                   "lattice": "-", "witness": "-", "witness_members": 0,
                   "confirmed_m": "-", "best_lattices": "-", "status": "UNCONFIRMED"}
        row["seconds"] = f"{time.perf_counter() - t0:.2f}"
        rows.append(row)
        log.info("d=%d m=%s %s", d, row["m"], row["status"])
    return rows


def write_table(rows: Sequence[dict], fmt: str) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=TABLE_FIELDS, delimiter="\t" if fmt == "tsv" else ",",
                       lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_table(args) -> int:
    from .report import table_figure
    out = Path(args.out)
    if min(args.d) < 4 or max(args.d) > args.max_d:
        raise lattice.BadSpec(f"d must lie in 4..{args.max_d}")
    rows = table_rows(args.d, out, args.node_budget, confirm=not args.no_confirm,
                      workers=args.workers)
    text = write_table(rows, args.format)
    table_path = formats.save(out / f"table.{args.format}", text)
    fig_path = table_figure(rows, out / "table.png")
    sys.stdout.write(text)
    _out(f"table: {table_path}")
    _out(f"figure: {fig_path}")
    return EXIT_INVALID if any(r["status"] == "MISMATCH" for r in rows) else EXIT_OK


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                        help="threads for pairwise family checks (default: all cores)")
    common.add_argument("--node-budget", type=int, default=search.DEFAULT_NODE_BUDGET,
                        help="search node budget per search (default: %(default)s)")
    common.add_argument("--strict-inner-products", action="store_true",
                        help="require every allowed inner product to occur")
    common.add_argument("--debug", action="store_true", help="run debug-level invariant checks")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = argparse.ArgumentParser(prog="muwm", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="build a family and its certificate")
    c.add_argument("what", choices=["binary-mquwm", "z4-mquwm", "d-frames", "weight4"])
    c.add_argument("--m", type=int, help="code parameter (binary: odd m >= 3; z4: m >= 2)")
    c.add_argument("--d", type=int, help="order (d-frames: even; weight4: 4..)")
    c.add_argument("--lattice", help="weight4 witness lattice override, e.g. E7+D10")
    c.add_argument("--out", default=".", help="output directory (default: .)")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="verify a family file")
    v.add_argument("family")
    v.add_argument("--params", type=int, nargs=4, metavar=("D", "K", "L", "A"),
                   help="verify against these parameters instead of the file's")
    v.set_defaults(func=cmd_verify)

    dm = sub.add_parser("derive-muwm", parents=[common],
                        help="turn an MQUWM family into MUWM via W_i W_1^T / sqrt(a)")
    dm.add_argument("family")
    dm.add_argument("--transpose", action="store_true",
                    help="use the transposed form (requires MUWM input)")
    dm.add_argument("-o", "--output", help="write the derived family here instead of stdout")
    dm.set_defaults(func=cmd_derive)

    de = sub.add_parser("decompose", parents=[common], help="cross-polytope / 2-frame decomposition")
    src = de.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", help="root system, e.g. E7 or D4+E7")
    src.add_argument("--code", help="code file")
    de.add_argument("--frame-size", type=int)
    de.add_argument("--out", default=".")
    de.set_defaults(func=cmd_decompose)

    r = sub.add_parser("roots", parents=[common], help="dump a root system as a code file")
    r.add_argument("--family", required=True)
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_roots)

    b = sub.add_parser("bound", parents=[common], help="exact bound certificates")
    b.add_argument("kind", choices=["lp", "count"])
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--strict-coefficients", action="store_true",
                   help="fail (exit 1) if computed coefficients differ from the printed ones")
    b.add_argument("--wrap", action="store_true", help="wrap in the certificate envelope")
    b.set_defaults(func=cmd_bound)

    t = sub.add_parser("table", parents=[common], help="weight-4 MUWM maxima per order")
    t.add_argument("--d", type=parse_range, default=parse_range("4..17"))
    t.add_argument("--max-d", type=int, default=24, help="largest order accepted")
    t.add_argument("--format", choices=["tsv", "csv"], default="tsv")
    t.add_argument("--no-confirm", action="store_true", help="skip the independent search")
    t.add_argument("--out", default=".")
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("screen", parents=[common], help="necessary-condition screening")
    s.add_argument("d", type=int)
    s.add_argument("k", type=int)
    s.add_argument("a", type=int)
    s.add_argument("--size", type=int)
    s.set_defaults(func=cmd_screen)
    return p


def _require(args, parser) -> None:
    if args.command == "construct":
        need = "m" if args.what in ("binary-mquwm", "z4-mquwm") else "d"
        if getattr(args, need) is None:
            parser.error(f"construct {args.what} needs --{need}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _require(args, parser)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except MuwmError as exc:
        print(f"error: {exc.name}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
