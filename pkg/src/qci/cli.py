"""Command-line front end.  Every command writes one JSON (or CSV) report.

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 bad
configuration or input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from dataclasses import asdict, dataclass, field

from . import certificates as ct
from . import modules as md
from . import towers as tw
from .algebra import QciPresentation, gen, homogeneous, n_part_power_formula_check, power, sigma
from .errors import ConfigError, NoAlphaFound, OddCodimension, PositiveCharacteristic, QciError
from .scalars import Cyclotomic, PrimeField, parse_field

SCHEMA_VERSION = 1
COMMANDS = ("verify-lemmas", "sweep-membership", "ghost", "upper", "tower", "periodicity")


@dataclass
class RunConfig:
    command: str
    n: int = 2
    a: int = 2
    field: str | None = None
    exponents: list | None = None
    commutators: list | None = None
    trials: int = 100
    seed: int = 0
    window: tuple = (-2, 2)
    module: str | None = None
    out: str | None = None
    format: str = "json"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.n < 1:
            raise ConfigError("--n must be at least 1")
        if self.a < 2:
            raise ConfigError("--a must be at least 2")
        if self.trials < 0:
            raise ConfigError("--trials must be non-negative")
        if self.window[0] > self.window[1]:
            raise ConfigError("--window needs j0 <= j1")
        if self.format not in ("json", "csv"):
            raise ConfigError("--format is json or csv")

    def field_spec(self):
        text = self.field
        if text is None:
            text = f"cyclo:{self.a}" if self.command == "upper" else _default_prime(self.a)
        return parse_field(text)

    def header(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d["window"] = list(self.window)
        return d


def _default_prime(a: int) -> str:
    p = a + 1
    while True:
        if all(p % k for k in range(2, int(p**0.5) + 1)) and (p - 1) % a == 0 and p >= 5:
            return f"p:{p}"
        p += 1


def _check(cid: str, passed: bool, **extra) -> dict:
    return {"id": cid, "passed": bool(passed), **extra}


def _homogeneous(cfg: RunConfig):
    F = cfg.field_spec()
    return homogeneous(cfg.n, cfg.a, F)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_verify_lemmas(cfg: RunConfig) -> dict:
    p = _homogeneous(cfg)
    rng = random.Random(cfg.seed)
    a, n = cfg.a, cfg.n
    fail_i = fail_ii = 0
    alphas = [ct.sample_alpha(p, rng) for _ in range(cfg.trials)]
    for alpha in alphas:
        s = sigma(p, alpha)
        if power(s, a):
            fail_i += 1
        pw = [p.one()]
        for _ in range(a - 1):
            pw.append(pw[-1] * s)
        for i in range(1, n + 1):
            x = gen(p, i)
            tot = p.zero()
            for j in range(a):
                tot = tot + pw[j] * x * pw[a - 1 - j]
            if tot:
                fail_ii += 1
    checks = [
        _check("lincomb-i", fail_i == 0, trials=len(alphas), failures=fail_i),
        _check("lincomb-ii", fail_ii == 0, trials=len(alphas), failures=fail_ii),
    ]
    # open-set implications on a random cyclic module
    beta = ct.sample_alpha(p, rng)
    sb = sigma(p, beta)
    M = md.cyclic_quotient(p, sb) if sb else md.simple_module(p)
    sample = ct.sample_open_sets(p, M, min(cfg.trials, 50), rng)
    checks.append(
        _check(
            "openset",
            sample.implications_ok,
            trials=len(sample.samples),
            generic_rank_sigma=sample.generic_rank_sigma,
            generic_rank_sigma_pow=sample.generic_rank_sigma_pow,
            density_U1=sample.density("in_U1"),
            density_U2=sample.density("in_U2"),
        )
    )
    # periodicity diagrams
    bad = 0
    count = 0
    for k in range(min(cfg.trials, 20)):
        alpha = ct.sample_alpha(p, rng)
        if not sigma(p, alpha):
            continue
        count += 1
        if not md.periodicity_diagrams_check(p, alpha, 1 + k % n):
            bad += 1
    checks.append(_check("factoring-diagrams", bad == 0, trials=count, failures=bad))
    if n % 2 == 0 and n >= 4:
        ok = all(
            n_part_power_formula_check(p, a1, i)
            for a1 in [p.field.one, p.field(2) if p.field(2) else p.field.one]
            for i in range(a)
        )
        checks.append(_check("n-part-power-formula", ok))
    return {"checks": checks}


def cmd_sweep_membership(cfg: RunConfig) -> dict:
    if cfg.n % 2:
        raise OddCodimension("sweep-membership needs even n")
    p = _homogeneous(cfg)
    F = p.field
    rng = random.Random(cfg.seed)
    rows = []
    agree = True
    in_v = 0
    for _ in range(cfg.trials):
        alpha = ct.sample_alpha(p, rng)
        rep = ct.v_membership(p, alpha)
        if rep.lambda_coefficient is not None and rep.lambda_coefficient and rep.member:
            agree = False
        in_v += not rep.member
        rows.append(rep.to_dict())
    checks = [
        _check("certificate-implication", agree, trials=cfg.trials),
    ]
    density = in_v / cfg.trials if cfg.trials else None
    checks.append(_check("v-nonempty", in_v > 0, density=density))
    if cfg.n >= 4:
        dist = []
        for a1 in _distinguished_firsts(F, rng):
            # sigma = a1 x_1 + x_3 + x_5 + ... + x_{n-1}
            alpha = [a1] + [F.one if k % 2 == 0 else F.zero for k in range(1, cfg.n)]
            outside = not ct.membership_two_sided(p, alpha, ct.build_w(p, alpha)).member
            dist.append(outside and bool(ct.lambda_coefficient_certificate(p, alpha)))
        checks.append(_check("distinguished-in-V", all(dist), count=len(dist)))
    return {"checks": checks, "rows": rows, "summary": {"density_V": density}}


def _distinguished_firsts(F, rng):
    if isinstance(F, PrimeField):
        return [F(k) for k in range(1, F.characteristic)]
    out = []
    while len(out) < 10:
        x = F.sample(rng)
        if x:
            out.append(x)
    return out


def _load_module(path: str, p: QciPresentation) -> md.FdModule:
    try:
        with open(path) as fh:
            data = json.load(fh)
        M = md.FdModule.from_dict(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"cannot read module file {path}: {exc}") from exc
    if M.presentation != p:
        raise ConfigError("module file is over a different presentation")
    return M


def cmd_ghost(cfg: RunConfig) -> dict:
    if cfg.n % 2:
        raise OddCodimension("the ghost witness needs even n")
    p = _homogeneous(cfg)
    rng = random.Random(cfg.seed)
    M = _load_module(cfg.module, p) if cfg.module else md.simple_module(p)
    sample = ct.sample_open_sets(p, M, max(cfg.trials, 1), rng)
    densities = {f: sample.density(f) for f in ("in_U1", "in_U2", "in_V")}
    chosen = None
    for s in sample.samples:
        if s["in_U1"] and s["in_U2"] and s["in_V"] and s["implications_ok"] is not False:
            chosen = s["alpha"]
            break
    if chosen is None:
        raise NoAlphaFound(f"no sampled alpha in U_M and V; densities {densities}")
    alpha = [p.field.parse(x) for x in chosen]
    report = md.ghost_chain_witness(p, alpha, M, cfg.window)
    checks = [
        _check("factoring-per-step", report.per_step_ok),
        _check("composition-is-w", report.composition_equals_w),
        _check("composition-stably-nonzero", report.composition_stably_nonzero),
    ]
    return {
        "checks": checks,
        "witness": report.to_dict(),
        "densities": densities,
        "module_dim": M.dim,
        "lower_bound": report.lower_bound(cfg.n),
    }


def cmd_upper(cfg: RunConfig) -> dict:
    F = cfg.field_spec()
    if not isinstance(F, Cyclotomic):
        raise PositiveCharacteristic("global dimension is computed over cyclotomic fields only")
    rep = tw.upper_bound_report(cfg.n, cfg.a, F)
    checks = [
        _check("upperbound-summand", all(rep["summand"].values())),
        _check("upperbound-simples", rep["simples_one_dimensional"]),
        _check("upperbound-gldim", rep["satisfied"]),
    ]
    return {"checks": checks, "upper": rep, "bracket": [cfg.n + 1, 2 * cfg.n]}


def cmd_tower(cfg: RunConfig) -> dict:
    rng = random.Random(cfg.seed)
    F = cfg.field_spec()
    exps = tuple(cfg.exponents) if cfg.exponents else (cfg.a,) * cfg.n
    n = len(exps)
    if cfg.commutators:
        comms = tuple(F.parse(str(c)) for c in cfg.commutators)
    else:
        comms = []
        while len(comms) < n * (n - 1) // 2:
            c = F.sample(rng)
            if c:
                comms.append(c)
        comms = tuple(comms)
    p = QciPresentation(exps, comms, F)
    steps = tw.chain_steps(p)
    checks = [_check("chain-freeness", all(s.ok for s in steps), steps=len(steps))]
    return {"checks": checks, "steps": [s.to_dict() for s in steps], "commutators": [str(c) for c in comms]}


def cmd_periodicity(cfg: RunConfig) -> dict:
    p = _homogeneous(cfg)
    rng = random.Random(cfg.seed)
    rows = []
    for k in range(cfg.trials):
        alpha = ct.sample_alpha(p, rng)
        if not sigma(p, alpha):
            continue
        phat = 1 + k % cfg.n
        res = md.periodicity_diagrams(p, alpha, phat)
        rows.append({"alpha": [str(x) for x in alpha], "p_hat": phat, "checks": res, "passed": all(res.values())})
    checks = [_check("factoring-diagrams", all(r["passed"] for r in rows), trials=len(rows))]
    return {"checks": checks, "rows": rows}


HANDLERS = {
    "verify-lemmas": cmd_verify_lemmas,
    "sweep-membership": cmd_sweep_membership,
    "ghost": cmd_ghost,
    "upper": cmd_upper,
    "tower": cmd_tower,
    "periodicity": cmd_periodicity,
}


# --------------------------------------------------------------------------
# plumbing
# --------------------------------------------------------------------------


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Execute a command; returns (report, exit code)."""
    cfg.validate()
    report = {"schema_version": SCHEMA_VERSION, "command": cfg.command, "config": cfg.header()}
    try:
        body = HANDLERS[cfg.command](cfg)
    except NoAlphaFound as exc:
        report.update({"checks": [_check("alpha-found", False)], "error": str(exc), "passed": False})
        return report, 1
    report.update(body)
    report["passed"] = all(c["passed"] for c in report["checks"])
    return report, 0 if report["passed"] else 1


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    rows = report.get("rows")
    if rows and isinstance(rows[0], dict) and "member" in rows[0]:
        w.writerow(["alpha", "member", "lambda_coefficient", "degree"])
        for r in rows:
            w.writerow([" ".join(r["alpha"]), r["member"], r["lambda_coefficient"], r["degree"]])
    else:
        w.writerow(["check", "passed"])
        for c in report.get("checks", []):
            w.writerow([c["id"], c["passed"]])
    return buf.getvalue()


def _window(text: str) -> tuple:
    try:
        j0, j1 = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("window is j0,j1") from exc
    return (j0, j1)


def _int_list(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qci", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--n", type=int, default=2)
        sp.add_argument("--a", type=int, default=2)
        sp.add_argument("--field", default=None, help="p:<prime> or cyclo:<order>")
        sp.add_argument("--trials", type=int, default=200 if name == "sweep-membership" else 100)
        sp.add_argument("--seed", type=int, default=int(os.environ.get("QCI_SEED", "0")))
        sp.add_argument("--window", type=_window, default=(-2, 2))
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        if name == "ghost":
            sp.add_argument("--module", default=None, help="FdModule JSON file (default: simple module)")
        if name == "tower":
            sp.add_argument("--exponents", type=_int_list, default=None)
            sp.add_argument("--commutators", type=lambda s: s.split(","), default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cfg = RunConfig(
        command=args.command,
        n=args.n,
        a=args.a,
        field=args.field,
        exponents=getattr(args, "exponents", None),
        commutators=getattr(args, "commutators", None),
        trials=args.trials,
        seed=args.seed,
        window=tuple(args.window),
        module=getattr(args, "module", None),
        out=args.out,
        format=args.format,
    )
    try:
        report, code = run(cfg)
    except (QciError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(report, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
