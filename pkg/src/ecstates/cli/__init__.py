"""Command-line interface: ``ecstates <command> ...``.

Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 error
(the error class name is printed on standard error).  Scalars are printed
with 12 digits after the decimal point; documents keep full precision.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from ..constrained_opt import (
    KrausChannel,
    dephasing_channel,
    depolarizing_channel,
    enorm,
    entropy_bits,
    identity_channel,
    min_output_entropy,
    random_channel,
)
from ..decomposition import bounded_energy_decomposition, equal_energy_decomposition, finite_rank_approximation, verify_certificate
from ..errors import DocumentError, ECStatesError, InvalidParameter
from ..extremality import extreme_oracle, is_extreme_state, is_extreme_subnormalized, SetKind
from ..states import (
    Mode,
    as_observable,
    energy,
    gibbs_state,
    oscillator_observable,
    random_density,
    random_observable,
    random_pure,
    require_member,
    validate_density,
)
from . import documents
from .documents import Report

__all__ = ["main", "build_parser", "fmt"]


def fmt(x: float) -> str:
    return f"{x:.12f}"


def _emit(obj, out) -> None:
    text = documents.serialize(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_matrix(path, what):
    obj = documents.load(path)
    if isinstance(obj, np.ndarray) and obj.ndim == 2:
        return obj
    raise DocumentError(f"{what} file must hold a matrix document")


def _load_state(path):
    """A state file holds a matrix document or a vector document (a pure state)."""
    obj = documents.load(path)
    if isinstance(obj, np.ndarray) and obj.ndim == 1:
        nrm = np.linalg.norm(obj)
        if nrm == 0:
            raise InvalidParameter("zero vector is not a state")
        v = obj / nrm
        return np.outer(v, v.conj())
    if isinstance(obj, np.ndarray) and obj.ndim == 2:
        return obj
    raise DocumentError("state file must hold a matrix or vector document")


def _load_channel(path) -> KrausChannel:
    obj = documents.load(path)
    if not isinstance(obj, KrausChannel):
        raise DocumentError("channel file must hold a channel document")
    return obj


# --- commands ---------------------------------------------------------------------


def cmd_energy(args) -> int:
    rho = validate_density(_load_state(args.state))
    H = as_observable(_load_matrix(args.observable, "observable"))
    print(fmt(energy(rho, H)))
    return 0


def cmd_extreme(args) -> int:
    T = _load_state(args.state)
    H = as_observable(_load_matrix(args.observable, "observable"))
    kind = SetKind.SUBNORMALIZED if args.subnormalized else SetKind.STATES
    if args.oracle:
        rep = extreme_oracle(T, H, args.budget, kind)
    elif args.subnormalized:
        rep = is_extreme_subnormalized(T, H, args.budget)
    else:
        rep = is_extreme_state(T, H, args.budget)
    data = {
        "is_extreme": rep.is_extreme,
        "method": rep.method.value,
        "set": kind.value,
        "rank": rep.rank,
        "perturbation_dim": rep.perturbation_dim,
        "energy_active": rep.energy_active,
        "trace_active": rep.trace_active,
    }
    if rep.witness is not None:
        data["witness"] = np.asarray(rep.witness, dtype=np.complex128)
    _emit(Report("extremality", data), args.out)
    return 0 if rep.is_extreme else 1


def cmd_decompose(args) -> int:
    rho = validate_density(_load_state(args.state))
    H = as_observable(_load_matrix(args.observable, "observable"))
    mode = Mode(args.mode)
    if mode is Mode.AT_MOST:
        if args.budget is None:
            raise InvalidParameter("--mode at-most needs --budget")
        cert = bounded_energy_decomposition(rho, H, args.budget)
    else:
        if args.budget is not None:
            # an exact-energy ensemble can only sit at the state's own energy
            require_member(rho, H, args.budget)
            e0 = energy(rho, H)
            if abs(e0 - args.budget) > 1e-8 * max(1.0, abs(e0)):
                raise InvalidParameter(f"exact mode needs --budget equal to Tr H rho = {e0:.12g}")
        cert = equal_energy_decomposition(rho, H)
    _emit(cert, args.out)
    return 0 if verify_certificate(cert) else 1


def cmd_enorm(args) -> int:
    A = _load_matrix(args.operator, "operator")
    H = as_observable(_load_matrix(args.observable, "observable"))
    if args.curve is not None:
        if args.curve < 2:
            raise InvalidParameter("--curve needs at least 2 points")
        emax = args.emax if args.emax is not None else H.max_energy
        if emax < H.ground_energy:
            raise InvalidParameter("--emax below the ground energy")
        grid = np.linspace(H.ground_energy, emax, args.curve)
        lines = ["E,value"] + [f"{fmt(E)},{fmt(enorm(A, H, float(E)).value)}" for E in grid]
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    if args.budget is None:
        raise InvalidParameter("--budget is required without --curve")
    res = enorm(A, H, args.budget)
    print(fmt(res.value))
    if args.out:
        documents.dump(Report("enorm", {
            "budget": float(args.budget),
            "value": res.value,
            "mu_star": res.mu_star,
            "dual_value": res.dual_value,
            "gap": res.gap,
            "witness": res.witness.vec,
        }), args.out)
    return 0


def cmd_minent(args) -> int:
    Phi = _load_channel(args.channel)
    H = as_observable(_load_matrix(args.observable, "observable"))
    res = min_output_entropy(Phi, H, args.budget, Mode(args.mode), n_starts=args.starts, seed=args.seed)
    _emit(Report("min_output_entropy", {
        "mode": res.mode.value,
        "budget": float(args.budget),
        "value_nats": res.value,
        "value_bits": entropy_bits(res.value),
        "argmin": res.argmin.vec,
        "argmin_energy": H.expectation(res.argmin),
        "restarts_used": res.restarts_used,
        "seed": args.seed,
    }), args.out)
    return 0


def _ranks(text: str) -> list[int]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise InvalidParameter("empty rank list")
    try:
        ranks = [int(t) for t in items]
    except ValueError as exc:
        raise InvalidParameter(f"ranks must be integers, got {text!r}") from exc
    if any(n < 0 for n in ranks):
        raise InvalidParameter("ranks must be nonnegative")
    return ranks


def cmd_approx(args) -> int:
    ranks = _ranks(args.ranks)
    rho = validate_density(_load_state(args.state))
    H = as_observable(_load_matrix(args.observable, "observable"))
    comps = list(zip(rho.eigenvalues, rho.eigenvectors.T))
    rows = []
    e0 = energy(rho, H)
    for n in ranks:
        if n >= rho.dim:
            # nothing left to truncate: rho_n is rho itself
            rows.append({"n": n, "tail_mass": 0.0, "trace_distance": 0.0, "energy": e0})
            continue
        _, rep = finite_rank_approximation(comps, H, n)
        rows.append({
            "n": n,
            "tail_mass": rep.tail_mass,
            "trace_distance": rep.trace_distance,
            "energy": rep.energy,
        })
    _emit(Report("finite_rank_approximation", {"original_energy": e0, "rows": rows}), args.out)
    return 0


def cmd_fixture(args) -> int:
    """Seeded fixture documents for experiments and tests."""
    name, d, seed = args.name, args.dim, args.seed
    if name == "oscillator":
        obj = oscillator_observable(d).mat
    elif name == "gibbs":
        obj = gibbs_state(oscillator_observable(d), args.beta).mat
    elif name == "random-state":
        obj = random_density(d, args.rank, seed).mat
    elif name == "random-pure":
        obj = random_pure(d, seed).vec
    elif name == "random-observable":
        obj = random_observable(d, seed).mat
    elif name == "identity-channel":
        obj = identity_channel(d)
    elif name == "dephasing-channel":
        obj = dephasing_channel()
    elif name == "depolarizing-channel":
        obj = depolarizing_channel(d)
    elif name == "random-channel":
        obj = random_channel(d, d, args.kraus, seed)
    else:  # argparse restricts the choices
        raise InvalidParameter(f"unknown fixture {name!r}")
    _emit(obj, args.out)
    return 0


FIXTURES = (
    "oscillator", "gibbs", "random-state", "random-pure", "random-observable",
    "identity-channel", "dephasing-channel", "depolarizing-channel", "random-channel",
)


def _finite(text: str) -> float:
    x = float(text)
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return x


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ecstates", description="Energy-constrained quantum state tools.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("energy", help="print Tr H rho")
    s.add_argument("--state", required=True)
    s.add_argument("--observable", required=True)
    s.set_defaults(func=cmd_energy)

    s = sub.add_parser("extreme", help="extremality verdict (exit 0 extreme, 1 not)")
    s.add_argument("--state", required=True)
    s.add_argument("--observable", required=True)
    s.add_argument("--budget", required=True, type=_finite)
    s.add_argument("--subnormalized", action="store_true", help="test in the subnormalized set")
    s.add_argument("--oracle", action="store_true", help="use the perturbation oracle")
    s.add_argument("--out")
    s.set_defaults(func=cmd_extreme)

    s = sub.add_parser("decompose", help="pure-state ensemble with certificate")
    s.add_argument("--state", required=True)
    s.add_argument("--observable", required=True)
    s.add_argument("--budget", type=_finite)
    s.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.EXACT.value)
    s.add_argument("--out")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("enorm", help="energy-constrained operator norm, or a CSV curve")
    s.add_argument("--operator", required=True)
    s.add_argument("--observable", required=True)
    s.add_argument("--budget", type=_finite)
    s.add_argument("--curve", type=int, metavar="N_POINTS")
    s.add_argument("--emax", type=_finite)
    s.add_argument("--out")
    s.set_defaults(func=cmd_enorm)

    s = sub.add_parser("minent", help="constrained minimal output entropy")
    s.add_argument("--channel", required=True)
    s.add_argument("--observable", required=True)
    s.add_argument("--budget", required=True, type=_finite)
    s.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.AT_MOST.value)
    s.add_argument("--starts", type=int, default=64)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_minent)

    s = sub.add_parser("approx", help="finite-rank approximations with tail on the ground state")
    s.add_argument("--state", required=True)
    s.add_argument("--observable", required=True)
    s.add_argument("--ranks", required=True, help="comma-separated list, e.g. 2,4,8")
    s.add_argument("--out")
    s.set_defaults(func=cmd_approx)

    s = sub.add_parser("fixture", help="write a seeded fixture document")
    s.add_argument("name", choices=FIXTURES)
    s.add_argument("--dim", type=int, default=2)
    s.add_argument("--beta", type=_finite, default=1.0)
    s.add_argument("--rank", type=int)
    s.add_argument("--kraus", type=int, default=2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_fixture)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ECStatesError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
