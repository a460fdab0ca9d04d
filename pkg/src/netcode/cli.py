"""``netcode`` command-line harness.

Exit codes: 0 success, 1 falsified verdict or failed suite, 2 parse error,
3 dimension error, 4 any other precondition failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .adversary import CONFIRMED, TransferFamily, verify_correction_theorem
from .budget import unlimited
from .codes import (
    GabidulinSpec,
    MatrixCode,
    gabidulin_generate,
    load_code,
    min_rank_distance,
    singleton_network_bounds,
    singleton_rank_bound,
)
from .decode import KINDS, code_delta, decode_bounded, decode_coherent, decode_noncoherent, decode_subspace, decode_yeung
from .discrepancy import INF, correction_bound
from .errors import DimensionError, NetcodeError, ParseError
from .ffmat import Field, Matrix, format_matrix, format_matrix_list, parse_matrix_list, read_matrix
from .netmetrics import (
    CoherentParams,
    NoncoherentParams,
    YeungParams,
    ddist_coherent,
    ddist_noncoherent,
    ddist_yeung,
    disc_coherent,
    disc_noncoherent,
    disc_yeung,
    injection_distance,
    rank_distance,
    subspace_distance,
)
from .spaces import Subspace, row_space
from .codes import SubspaceCode, lift_to_subspaces
from .suites import ACCEPTANCE, SUITES, run_suite


def _fmt(v: Any) -> str:
    return "inf" if v == INF else str(v)


def _dump(obj: Any, out: str | None) -> None:
    text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_space(path: str) -> Subspace:
    return row_space(read_matrix(path))


def _canonical_transfer(field: Field, n: int, rho: int, N: int | None = None) -> Matrix:
    """N x n matrix [[I_{n−ρ}, 0], [0, 0]]."""
    N = n if N is None else N
    if not 0 <= rho <= n or n - rho > N:
        raise NetcodeError(f"no {N}x{n} transfer matrix has deficiency {rho}")
    ent = [1 if r == c and r < n - rho else 0 for r in range(N) for c in range(n)]
    return Matrix(field, N, n, tuple(ent))


def _params(args: argparse.Namespace, model: str, code: MatrixCode | None, field: Field, n: int) -> Any:
    if model == "coherent":
        a = read_matrix(args.transfer) if args.transfer else _canonical_transfer(field, n, args.rho, args.N)
        return CoherentParams(a)
    if model == "yeung":
        if not args.edges:
            raise NetcodeError("the yeung model needs --edges F.mat")
        a = read_matrix(args.transfer) if args.transfer else _canonical_transfer(field, n, args.rho, args.N)
        return YeungParams(a, read_matrix(args.edges))
    if model == "noncoherent":
        return NoncoherentParams(args.rho, 0, args.N)
    if model == "subspace":
        return None
    raise NetcodeError(f"unknown model {model!r}; expected one of {KINDS}")


def _add_model_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=KINDS, default="coherent")
    p.add_argument("--rho", type=int, default=0, help="rank deficiency (canonical A when no --transfer)")
    p.add_argument("--N", type=int, default=None, help="number of received packets")
    p.add_argument("--transfer", help="transfer matrix A file")
    p.add_argument("--edges", help="edge transfer matrix F file (yeung model)")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

METRICS = ("rank-dist", "subspace", "injection", "disc-a", "delta-a", "disc-af", "delta-af", "disc-rho", "delta-rho")


def cmd_metric(args: argparse.Namespace) -> int:
    kind = args.kind
    if kind in ("subspace", "injection"):
        u, v = _read_space(args.inputs[0]), _read_space(args.inputs[1])
        value = subspace_distance(u, v) if kind == "subspace" else injection_distance(u, v)
    else:
        x, y = read_matrix(args.inputs[0]), read_matrix(args.inputs[1])
        if kind == "rank-dist":
            value = rank_distance(x, y)
        elif kind in ("disc-a", "delta-a"):
            p = CoherentParams(read_matrix(args.transfer) if args.transfer else _canonical_transfer(x.field, x.rows, args.rho, args.N))
            value = disc_coherent(p, x, y) if kind == "disc-a" else ddist_coherent(p, x, y)
        elif kind in ("disc-af", "delta-af"):
            if not args.edges:
                raise NetcodeError(f"{kind} needs --edges F.mat")
            a = read_matrix(args.transfer) if args.transfer else _canonical_transfer(x.field, x.rows, args.rho, args.N)
            p = YeungParams(a, read_matrix(args.edges))
            value = disc_yeung(p, x, y) if kind == "disc-af" else ddist_yeung(p, x, y)
        else:
            p = NoncoherentParams(args.rho, 0, args.N)
            value = disc_noncoherent(p, x, y) if kind == "disc-rho" else ddist_noncoherent(p, x, y)
    print(_fmt(value))
    return 0


def cmd_gen_code(args: argparse.Namespace) -> int:
    gs = GabidulinSpec(args.q, args.m, args.n, args.k)
    if args.matrices:
        text = format_matrix_list(gabidulin_generate(gs).codewords)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        _dump(gs.descriptor(), args.out)
    return 0


def _load_any_code(path: str, model: str) -> MatrixCode | SubspaceCode:
    code = load_code(path)
    if model == "subspace":
        lifted, injective = lift_to_subspaces(code)
        if not injective:
            raise NetcodeError("two codewords share a row space; the subspace code is not well defined")
        return lifted
    return code


def cmd_capability(args: argparse.Namespace) -> int:
    code = _load_any_code(args.code, args.model)
    words = code.members if isinstance(code, SubspaceCode) else code.codewords
    params = _params(args, args.model, None, words[0].field, 0 if isinstance(code, SubspaceCode) else code.n)
    delta = code_delta(code, args.model, params)
    tau = correction_bound(delta)
    record: dict[str, Any] = {
        "model": args.model,
        "size": len(words),
        "delta": _fmt(delta),
        "tau": _fmt(tau),
        "corrects_up_to": _fmt(tau) if tau != INF else "inf",
        "unbounded": delta == INF,
    }
    if delta != INF and tau >= 0:
        record["detection"] = [{"t": t, "sigma": delta - t - 1} for t in range(int(tau) + 1)]
    _dump(record, args.out)
    return 0


def cmd_decode(args: argparse.Namespace) -> int:
    code = _load_any_code(args.code, args.model)
    words = code.members if isinstance(code, SubspaceCode) else code.codewords
    field = words[0].field
    params = _params(args, args.model, None, field, 0 if isinstance(code, SubspaceCode) else code.n)
    y = read_matrix(args.received)
    received: Matrix | Subspace = row_space(y) if args.model == "subspace" else y
    if args.bounded is not None:
        out = decode_bounded(code, args.model, params, received, args.bounded)
    elif args.model == "coherent":
        out = decode_coherent(code, params, y)
    elif args.model == "yeung":
        out = decode_yeung(code, params, y)
    elif args.model == "noncoherent":
        out = decode_noncoherent(code, params, y)
    else:
        out = decode_subspace(code, received)
    record = out.to_json()
    if not out.failed:
        record["codeword"] = format_matrix(words[out.result]) if isinstance(code, MatrixCode) else format_matrix(words[out.result].basis)
    _dump(record, args.out)
    return 0


def _simulate(config: dict) -> dict:
    code = MatrixCode.of(parse_matrix_list(config["code"]))
    model = config["model"]
    if model == "coherent" and config.get("family"):
        params: Any = TransferFamily(config["rho"], config.get("N"))
    elif model in ("coherent", "yeung"):
        a = parse_matrix_list(config["transfer"])[0] if config.get("transfer") else _canonical_transfer(code.field, code.n, config["rho"], config.get("N"))
        if model == "coherent":
            params = CoherentParams(a)
        else:
            params = YeungParams(a, parse_matrix_list(config["edges"])[0])
    elif model == "noncoherent":
        params = NoncoherentParams(config["rho"], 0, config.get("N"))
    else:
        raise NetcodeError(f"simulate supports coherent, yeung and noncoherent, not {model!r}")
    report = verify_correction_theorem(model, code, params, config["t"], config["mode"], config["trials"], config["seed"])
    out = report.to_json()
    out["replay"] = config
    return out


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.replay:
        try:
            config = json.loads(Path(args.replay).read_text())["replay"]
        except (json.JSONDecodeError, KeyError) as exc:
            raise ParseError(f"{args.replay}: not a simulate report ({exc})") from exc
    else:
        if args.code is None or args.t is None:
            raise NetcodeError("simulate needs CODE and --t (or --replay REPORT)")
        code = load_code(args.code)
        config = {
            "code": format_matrix_list(code.codewords),
            "model": args.model,
            "rho": args.rho,
            "N": args.N,
            "transfer": format_matrix(read_matrix(args.transfer)) if args.transfer else None,
            "edges": format_matrix(read_matrix(args.edges)) if args.edges else None,
            "family": args.family,
            "t": args.t,
            "mode": args.mode,
            "trials": args.trials,
            "seed": args.seed,
        }
    print(f"seed: {config['seed']}", file=sys.stderr)
    report = _simulate(config)
    _dump(report, args.out)
    print(f"verdict: {report['verdict']} ({report['successes']}/{report['trials']} trials decoded)", file=sys.stderr)
    return 0 if report["verdict"] == CONFIRMED else 1


def cmd_verify(args: argparse.Namespace) -> int:
    names = list(ACCEPTANCE) if args.suite == "all" else [args.suite]
    results = []
    for name in names:
        res = run_suite(name)
        print(res.summary(), file=sys.stderr)
        results.append(res)
    report = {"suites": [r.to_json() for r in results], "passed": all(r.passed for r in results)}
    _dump(report, args.out)
    if args.replay_dir:
        target = Path(args.replay_dir)
        target.mkdir(parents=True, exist_ok=True)
        for r in results:
            if not r.passed:
                (target / f"{r.name}.json").write_text(json.dumps(r.to_json(), indent=2, ensure_ascii=False) + "\n")
    return 0 if report["passed"] else 1


def cmd_bounds(args: argparse.Namespace) -> int:
    code = load_code(args.code)
    q, n, m = code.field.q, code.n, code.m
    d = min_rank_distance(code)
    a = read_matrix(args.transfer) if args.transfer else _canonical_transfer(code.field, n, args.rho, args.N)
    p = CoherentParams(a)
    delta_a = code_delta(code, "coherent", p)
    record: dict[str, Any] = {
        "size": len(code),
        "d_R": d,
        "rank_singleton_bound": singleton_rank_bound(q, n, m, d),
        "mrd": len(code) == singleton_rank_bound(q, n, m, d),
        "rho": p.rho,
        "delta_A": delta_a,
    }
    delta_af = None
    if args.edges:
        delta_af = code_delta(code, "yeung", YeungParams(a, read_matrix(args.edges)))
        record["delta_AF"] = _fmt(delta_af)
    nb = singleton_network_bounds(code, delta_a, n, p.rho, q**m, delta_af if delta_af != INF else None)
    record.update({
        "bound_yeung": str(nb.bound14), "bound_coherent": str(nb.bound15),
        "achieved_yeung": nb.achieved14, "achieved_coherent": nb.achieved15, "degenerate": nb.degenerate,
    })
    _dump(record, args.out)
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netcode", description="Adversarial error correction for network coding.")
    parser.add_argument("--version", action="version", version=f"netcode {__version__}")
    parser.add_argument("--force", action="store_true", help="ignore the enumeration budget")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metric", help="evaluate a distance or discrepancy")
    p.add_argument("kind", choices=METRICS)
    p.add_argument("inputs", nargs=2)
    p.add_argument("--rho", type=int, default=0)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--transfer")
    p.add_argument("--edges")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("gen-code", help="generate a Gabidulin code")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--matrices", action="store_true", help="write the codewords instead of the descriptor")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen_code)

    p = sub.add_parser("capability", help="correction and detection capability of a code")
    p.add_argument("code")
    _add_model_options(p)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_capability)

    p = sub.add_parser("decode", help="decode one received matrix")
    p.add_argument("code")
    p.add_argument("received")
    _add_model_options(p)
    p.add_argument("--bounded", type=int, default=None, metavar="T", help="bounded decoding with radius T")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="run the adversary against a code")
    p.add_argument("code", nargs="?")
    _add_model_options(p)
    p.add_argument("--t", type=int)
    p.add_argument("--family", action="store_true", help="coherent: every A with deficiency --rho")
    p.add_argument("--mode", choices=("auto", "exhaustive", "randomized"), default="auto")
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replay", help="rerun the configuration stored in a report")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("suite", choices=("all", *SUITES))
    p.add_argument("-o", "--out")
    p.add_argument("--replay-dir", help="directory for counterexample files of failed suites")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="rank and network Singleton bounds of a code")
    p.add_argument("code")
    p.add_argument("--rho", type=int, default=0)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--transfer")
    p.add_argument("--edges")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.force:
            with unlimited():
                return args.func(args)
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except DimensionError as exc:
        print(f"dimension error: {exc}", file=sys.stderr)
        return 3
    except (NetcodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
