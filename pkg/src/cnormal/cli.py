"""Command-line front end: ``cnormal <verb> [flags]``.

Every verb reads JSON inputs (``-`` means stdin), writes one JSON report
with sorted keys to stdout and exits with

* 0 when the computation succeeded and the checked property holds,
* 1 when it succeeded and the property fails,
* 2 on invalid input or I/O errors (report ``{"error": {code, message}}``).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .canonical import CanonicalBlocks, c_normal_decompose, conjugate_normal_canonical, generate_c_normal
from .classify import twcnor_battery
from .conjugation import build_conjugation, random_conjugation
from .errors import CNormalError, InvalidInput
from .measure import classify_composition, classify_multiplication, radon_nikodym
from .numeric import DEFAULT_TOL, Tolerance, random_complex
from .toeplitz import is_c_normal_toeplitz

AUDIT_KINDS = ("identity", "flip", "xi_theta", "random")


class UsageError(CNormalError, ValueError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _tolerance(args) -> Tolerance:
    return DEFAULT_TOL if args.tol is None else Tolerance(args.tol, args.tol)


def _read(path: str, stdin):
    if path == "-":
        return io.loads(stdin.read())
    try:
        with open(path, encoding="utf-8") as fh:
            return io.loads(fh.read())
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.verb} needs {', '.join(missing)}")


def _conjugation(args, stdin, dim=None):
    if args.conjugation is not None:
        c = io.conjugation_from_json(_read(args.conjugation, stdin))
    else:
        dim = dim if dim is not None else args.dim
        if dim is None:
            raise UsageError(f"{args.verb} needs --conjugation or --dim")
        c = build_conjugation("identity", int(dim))
    return c


def _cmd_classify(args, stdin):
    _require(args, "matrix")
    n = io.matrix_from_json(_read(args.matrix, stdin))
    c = _conjugation(args, stdin, n.shape[0])
    report = twcnor_battery(n, c, _tolerance(args), seed=args.seed or 0)
    payload = report.to_dict() | {"consistent": report.consistent}
    summary = f"c_normal={report.c_normal} consistent={report.consistent}"
    return payload, 0 if report.c_normal else 1, summary


def _cmd_canonical(args, stdin):
    _require(args, "matrix")
    m = io.matrix_from_json(_read(args.matrix, stdin))
    tol = _tolerance(args)
    if args.conjugation is None:
        dec = conjugate_normal_canonical(m, tol)
        return dec.to_dict(), 0, f"residual={dec.residual:.3e}"
    c = io.conjugation_from_json(_read(args.conjugation, stdin))
    dec = c_normal_decompose(m, c, tol)
    return dec.to_dict(), 0, f"residuals={dec.reconstruction_residuals}"


def _parse_blocks(text: str, stdin) -> CanonicalBlocks:
    stripped = text.lstrip()
    obj = io.loads(text) if stripped.startswith("{") else _read(text, stdin)
    return io.blocks_from_json(obj)


def _cmd_generate(args, stdin):
    _require(args, "blocks")
    blocks = _parse_blocks(args.blocks, stdin)
    c = _conjugation(args, stdin, blocks.dim)
    n = generate_c_normal(c, blocks, seed=args.seed)
    return io.matrix_to_json(n.mat), 0, f"dim={c.dim}"


def _cmd_toeplitz(args, stdin):
    _require(args, "symbol")
    sym = io.symbol_from_json(_read(args.symbol, stdin))
    report = is_c_normal_toeplitz(sym, args.xi, args.theta, _tolerance(args))
    summary = f"c_normal={report.c_normal} eta={report.eta}"
    return report.to_dict(), 0 if report.c_normal else 1, summary


def _cmd_measure(args, stdin):
    _require(args, "space", "map", "involution")
    space = io.space_from_json(_read(args.space, stdin))
    map_obj = _read(args.map, stdin)
    alpha = io.map_from_json(_read(args.involution, stdin))
    tol = _tolerance(args)
    if isinstance(map_obj, dict) and "values" in map_obj:
        rep = classify_multiplication(io.values_from_json(map_obj), alpha, space, tol)
        payload = {"operator": "multiplication"} | rep._asdict()
    else:
        t = io.map_from_json(map_obj)
        rep = classify_composition(t, alpha, space, tol)
        h = radon_nikodym(t, space)
        payload = {"operator": "composition", "density": dict(h.values)} | rep._asdict()
    payload["agree"] = rep.c_normal == rep.criterion
    return payload, 0 if rep.c_normal else 1, f"c_normal={rep.c_normal} criterion={rep.criterion}"


def _dims(text: str | None) -> list[int]:
    if text is None:
        return list(range(2, 9))
    lo, _, hi = text.partition("-")
    try:
        lo_i = int(lo)
        hi_i = int(hi) if hi else lo_i
    except ValueError as exc:
        raise UsageError(f"--dim expects N or LO-HI, got {text!r}") from exc
    if lo_i < 1 or hi_i < lo_i:
        raise UsageError(f"bad dimension range {text!r}")
    return list(range(lo_i, hi_i + 1))


def _audit_instance(rng: np.random.Generator, dims: list[int], c_normal: bool):
    dim = int(rng.choice(dims))
    kind = AUDIT_KINDS[int(rng.integers(len(AUDIT_KINDS)))]
    if kind == "random":
        c = random_conjugation(dim, rng)
    elif kind == "xi_theta":
        xi, theta = rng.uniform(0, 2 * np.pi, size=2)
        c = build_conjugation(kind, dim, xi=xi, theta=theta)
    else:
        c = build_conjugation(kind, dim)
    if c_normal:
        n_pairs = int(rng.integers(dim // 2 + 1))
        singles = rng.uniform(0, 2, size=dim - 2 * n_pairs)
        pairs = [(rng.uniform(0, 2), rng.uniform(0.1, 2)) for _ in range(n_pairs)]
        blocks = CanonicalBlocks(singles, pairs)
        n = generate_c_normal(c, blocks, seed=rng).mat
    else:
        n = random_complex((dim, dim), rng)
    return dim, kind, c, n


def audit(dims=range(2, 9), trials: int = 300, seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> dict:
    """Run the eleven-condition battery on seeded random instances.

    Even trials are generated C-normal, odd trials are Gaussian matrices
    (almost surely not C-normal).  A trial disagrees when the condition
    flags are not unanimous or contradict the construction; each record
    carries the trial index and seed needed to replay it.
    """
    if trials < 1:
        raise InvalidInput("trials must be >= 1")
    dims = list(dims)
    seeds = np.random.SeedSequence(seed).spawn(trials)
    disagreements = []
    for i, ss in enumerate(seeds):
        truth = i % 2 == 0
        dim, kind, c, n = _audit_instance(np.random.default_rng(ss), dims, truth)
        report = twcnor_battery(n, c, tol)
        if not report.consistent or report.c_normal != truth:
            disagreements.append(
                {
                    "trial": i,
                    "seed": seed,
                    "dim": dim,
                    "conjugation": kind,
                    "expected": truth,
                    "flags": report.condition_flags,
                }
            )
    return {
        "trials": trials,
        "agreements": trials - len(disagreements),
        "disagreements": disagreements,
    }


def _cmd_audit(args, stdin):
    tol = _tolerance(args)
    if args.matrix is not None:
        n = io.matrix_from_json(_read(args.matrix, stdin))
        c = _conjugation(args, stdin, n.shape[0])
        report = twcnor_battery(n, c, tol)
        bad = [] if report.consistent else [{"trial": 0, "flags": report.condition_flags}]
        summary = {"trials": 1, "agreements": 1 - len(bad), "disagreements": bad}
    else:
        summary = audit(_dims(args.dim), args.trials, args.seed or 0, tol)
    ok = not summary["disagreements"]
    return summary, 0 if ok else 1, f"{summary['agreements']}/{summary['trials']} agree"


COMMANDS = {
    "classify": _cmd_classify,
    "canonical": _cmd_canonical,
    "generate": _cmd_generate,
    "toeplitz-check": _cmd_toeplitz,
    "measure-check": _cmd_measure,
    "audit": _cmd_audit,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cnormal", description="Classify and decompose C-normal operators.")
    p.add_argument("verb", choices=sorted(COMMANDS))
    p.add_argument("--matrix", help="matrix JSON file")
    p.add_argument("--conjugation", help="conjugation JSON file")
    p.add_argument("--symbol", help="Toeplitz symbol JSON file")
    p.add_argument("--space", help="measure space JSON file")
    p.add_argument("--map", help="point map or multiplier JSON file")
    p.add_argument("--involution", help="involution JSON file")
    p.add_argument("--theta", type=float, default=0.0, help="radians")
    p.add_argument("--xi", type=float, default=0.0, help="radians")
    p.add_argument("--tol", type=float, help="absolute and relative tolerance")
    p.add_argument("--seed", type=int)
    p.add_argument("--dim", help="dimension, or LO-HI range for audit")
    p.add_argument("--trials", type=int, default=300)
    p.add_argument("--blocks", help="blocks JSON file or inline JSON")
    p.add_argument("--verbose", action="store_true")
    return p


def run(argv, stdin=None, stdout=None, stderr=None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    verbose = "--verbose" in argv
    try:
        args = build_parser().parse_args(list(argv))
        payload, code, summary = COMMANDS[args.verb](args, stdin)
    except CNormalError as exc:
        payload = {"error": {"code": exc.code, "message": str(exc)}}
        code, summary = 2, f"error: {exc}"
    payload = {"schema_version": io.SCHEMA_VERSION} | payload
    stdout.write(io.dumps(payload) + "\n")
    if verbose:
        stderr.write(summary + "\n")
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
