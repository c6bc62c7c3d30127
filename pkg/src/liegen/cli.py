"""Command line driver: experiments in, CSV out.

All outputs are deterministic functions of the configuration, with no
timestamps or machine identifiers, so reruns are byte identical.  The
master seed comes from --seed when given, else the LIEGEN_SEED
environment variable, else zero.  Configurations serialize to a flat
key=value file in which every default is written out explicitly.

Exit codes: 0 success, 1 audit found mismatches, 2 a size cap was
exceeded, 3 invalid configuration or usage.
"""

import argparse
import os
import sys
from dataclasses import dataclass, fields, replace

from . import algdata, estimate, gentest, matgrp
from .errors import CapExceeded, InvalidConfig
from .rng import derive_seed

SEED_ENV = "LIEGEN_SEED"
FAMILIES = ("SL2", "SL3", "SP4", "PSL2", "PSL3", "PSP4")

CSV_HEADER = ("family,q,mode,r,s,classC,classD,trials,generates,"
              "proper_reducible,proper_subfield,proper_other,"
              "inconclusive,point,lo95,hi95,seed")
DECAY_HEADER = "p,a,q,word,trials,proper_subfield_fraction,scaled_fraction"
AUDIT_HEADER = "group,case,order,label,tabulated_dim,recomputed_dim,match"


# ----------------------------------------------------------- CSV rows

@dataclass
class Row:
    """One line of the main experiment schema."""

    family: str
    q: int
    mode: str              # exact or mc
    r: str                 # order or "" for whole-group runs
    s: str
    class_c: str
    class_d: str
    trials: int
    generates: int
    proper_reducible: int
    proper_subfield: int
    proper_other: int
    inconclusive: int
    point: float
    lo95: float | None
    hi95: float | None
    seed: int | None


@dataclass
class DecayCSVRow:
    p: int
    a: int
    q: int
    word: str
    trials: int
    fraction: float
    scaled: float


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_csv(rows) -> str:
    if rows and isinstance(rows[0], DecayCSVRow):
        header = DECAY_HEADER
    else:
        header = CSV_HEADER
    lines = [header]
    for r in rows:
        lines.append(",".join(_fmt(getattr(r, f.name)) for f in fields(r)))
    return "\n".join(lines) + "\n"


def _parse_cell(text, typ, optional=False):
    if text == "":
        if optional:
            return None
        if typ is str:
            return ""
        raise InvalidConfig("missing required CSV value")
    return typ(text)


def parse_csv(text: str):
    """Inverse of emit_csv; recognizes both schemas by their header."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidConfig("empty CSV")
    header, body = lines[0], lines[1:]
    out = []
    if header == DECAY_HEADER:
        for ln in body:
            c = ln.split(",")
            out.append(DecayCSVRow(int(c[0]), int(c[1]), int(c[2]), c[3],
                                   int(c[4]), float(c[5]), float(c[6])))
        return out
    if header != CSV_HEADER:
        raise InvalidConfig(f"unrecognized CSV header {header!r}")
    for ln in body:
        c = ln.split(",")
        out.append(Row(c[0], int(c[1]), c[2], c[3], c[4], c[5], c[6],
                       int(c[7]), int(c[8]), int(c[9]), int(c[10]),
                       int(c[11]), int(c[12]), float(c[13]),
                       _parse_cell(c[14], float, True),
                       _parse_cell(c[15], float, True),
                       _parse_cell(c[16], int, True)))
    return out


def row_from_report(rep: estimate.EstimateReport) -> Row:
    g = rep.group
    fam = ("P" if g.quotient else "") + g.family
    r = "" if rep.mode == "whole" else rep.label_c
    s = "" if rep.mode == "whole" else rep.label_d
    c = rep.counts
    return Row(fam, g.q, "mc", r, s, "ALL", "ALL", rep.trials, c[0], c[1],
               c[2], c[3], c[4], rep.point, rep.lo95, rep.hi95, rep.seed)


def row_from_exact(res: estimate.ExactResult) -> Row:
    g = res.group
    fam = ("P" if g.quotient else "") + g.family
    r = "" if res.r is None else str(res.r)
    s = "" if res.s is None else str(res.s)
    if res.restricted:
        lab_c, lab_d = res.cells[0].label_c, res.cells[0].label_d
    else:
        lab_c = lab_d = "ALL"
    c = res.counts
    return Row(fam, g.q, "exact", r, s, lab_c, lab_d, res.pairs, c[0],
               c[1], c[2], c[3], c[4], float(res.P), None, None, None)


# -------------------------------------------------------- configuration

_DEFAULTS = dict(
    command="", family="SL2", q="5", r="", s="", class_c="", class_d="",
    trials=10000, seed="", threads=1, block=estimate.DEFAULT_BLOCK,
    cap=matgrp.DEFAULT_ENUM_CAP, backend="", word="ABab", p=2, a="2",
    group="E8", dims="", delta="", exact=False, out="-", plot="",
)

_TYPES = {k: type(v) for k, v in _DEFAULTS.items()}


@dataclass
class ExperimentConfig:
    command: str
    family: str
    q: str
    r: str
    s: str
    class_c: str
    class_d: str
    trials: int
    seed: str
    threads: int
    block: int
    cap: int
    backend: str
    word: str
    p: int
    a: str
    group: str
    dims: str
    delta: str
    exact: bool
    out: str
    plot: str


def default_config() -> ExperimentConfig:
    return ExperimentConfig(**_DEFAULTS)


def serialize_config(cfg: ExperimentConfig) -> str:
    """Flat key=value form, every field written, keys sorted."""
    lines = []
    for f in sorted(fields(cfg), key=lambda f: f.name):
        v = getattr(cfg, f.name)
        if isinstance(v, bool):
            v = "true" if v else "false"
        lines.append(f"{f.name}={v}")
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> ExperimentConfig:
    cfg = default_config()
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if "=" not in ln:
            raise InvalidConfig(f"bad config line {ln!r}")
        key, _, val = ln.partition("=")
        key = key.strip().replace("-", "_")
        val = val.strip()
        if key not in _TYPES:
            raise InvalidConfig(f"unknown config key {key!r}")
        typ = _TYPES[key]
        if typ is bool:
            if val not in ("true", "false"):
                raise InvalidConfig(f"bad boolean {val!r} for {key}")
            cfg = replace(cfg, **{key: val == "true"})
        else:
            try:
                cfg = replace(cfg, **{key: typ(val)})
            except ValueError as e:
                raise InvalidConfig(f"bad value for {key}: {e}") from None
    return cfg


def _resolve_seed(cfg) -> int:
    if cfg.seed != "":
        return int(cfg.seed)
    env = os.environ.get(SEED_ENV, "")
    if env != "":
        return int(env)
    return 0


def _resolve_backend(cfg):
    return cfg.backend or None


def _int_list(text, what):
    try:
        return [int(t) for t in str(text).split(",") if t.strip() != ""]
    except ValueError:
        raise InvalidConfig(f"bad {what} list {text!r}") from None


def _family(cfg) -> str:
    fam = cfg.family.upper()
    if fam not in FAMILIES:
        raise InvalidConfig(f"unknown family {cfg.family!r}")
    return fam


def _orders(cfg):
    r = int(cfg.r) if cfg.r != "" else None
    s = int(cfg.s) if cfg.s != "" else None
    if (r is None) != (s is None):
        raise InvalidConfig("give both --r and --s or neither")
    return r, s


# ---------------------------------------------------------- plotting

def make_plot_script(csv_path: str, kind: str) -> str:
    """A small gnuplot program reading the emitted CSV."""
    lines = ["set datafile separator ','", "set key off"]
    if kind == "decay":
        lines += ["set logscale y", "set xlabel 'a'",
                  "set ylabel 'proper-subfield fraction'",
                  f"plot '{csv_path}' skip 1 using 2:6 with linespoints"]
    else:
        lines += ["set xlabel 'q'", "set ylabel 'estimated P'",
                  "set logscale x",
                  f"plot '{csv_path}' skip 1 using 2:14:15:16 "
                  "with yerrorbars"]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ commands

def _write_out(cfg, text):
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w") as fh:
            fh.write(text)


def _maybe_plot(cfg, kind):
    if not cfg.plot:
        return
    if cfg.out == "-":
        raise InvalidConfig("--plot needs --out to point at a file")
    with open(cfg.plot, "w") as fh:
        fh.write(make_plot_script(cfg.out, kind))


def _cmd_exact(cfg) -> int:
    group = matgrp.parse_group(_family(cfg), _single_q(cfg))
    be = _resolve_backend(cfg)
    if cfg.class_c or cfg.class_d:
        if not (cfg.class_c and cfg.class_d):
            raise InvalidConfig("give both --class-c and --class-d")
        res = estimate.exact_P_classes(group, cfg.class_c, cfg.class_d,
                                       cap=cfg.cap, backend=be)
    else:
        r, s = _orders(cfg)
        res = estimate.exact_P(group, r, s, cap=cfg.cap, backend=be)
    _write_out(cfg, emit_csv([row_from_exact(res)]))
    _maybe_plot(cfg, "estimate")
    return 0


def _cmd_estimate(cfg) -> int:
    group = matgrp.parse_group(_family(cfg), _single_q(cfg))
    r, s = _orders(cfg)
    mode = "whole" if r is None else "order"
    rep = estimate.monte_carlo_P(group, cfg.trials, _resolve_seed(cfg),
                                 mode=mode, r=r, s=s, threads=cfg.threads,
                                 block=cfg.block,
                                 backend=_resolve_backend(cfg))
    _write_out(cfg, emit_csv([row_from_report(rep)]))
    _maybe_plot(cfg, "estimate")
    return 0


def _cmd_sweep(cfg) -> int:
    fam = _family(cfg)
    qs = _int_list(cfg.q, "q")
    if not qs:
        raise InvalidConfig("sweep needs at least one q")
    r, s = _orders(cfg)
    be = _resolve_backend(cfg)
    rows = []
    if cfg.exact:
        for q in qs:
            group = matgrp.parse_group(fam, q)
            rows.append(row_from_exact(
                estimate.exact_P(group, r, s, cap=cfg.cap, backend=be)))
    else:
        mode = "whole" if r is None else "order"
        reps = estimate.sweep(fam, qs, cfg.trials, _resolve_seed(cfg),
                              mode=mode, r=r, s=s, threads=cfg.threads,
                              backend=be)
        rows = [row_from_report(rep) for rep in reps]
    _write_out(cfg, emit_csv(rows))
    _maybe_plot(cfg, "sweep")
    return 0


def _cmd_trace_field(cfg, reps) -> int:
    if not reps:
        raise InvalidConfig("trace-field needs at least one --rep")
    group = matgrp.parse_group(_family(cfg), _single_q(cfg))
    mats = [matgrp.parse_matrix(group, t) for t in reps]
    b = gentest.trace_field(mats)
    _write_out(cfg, f"{b}\n")
    return 0


def _cmd_scott(cfg) -> int:
    g = algdata.alg_group(cfg.group)
    dims = _int_list(cfg.dims, "dims")
    if len(dims) != 2:
        raise InvalidConfig("--dims wants two comma-separated dimensions")
    if cfg.delta != "":
        ok = algdata.scott_inequality(g, dims[0], dims[1], int(cfg.delta))
    else:
        ok = algdata.scott_precondition(g, dims[0], dims[1])
    _write_out(cfg, ("true" if ok else "false") + "\n")
    return 0


def _cmd_decay(cfg) -> int:
    a_list = _int_list(cfg.a, "a")
    if not a_list:
        raise InvalidConfig("decay needs at least one degree")
    seed = _resolve_seed(cfg)
    rows = []
    for a in a_list:
        d = estimate.subfield_trace_decay(cfg.p, a, word=cfg.word,
                                          trials=cfg.trials,
                                          seed=derive_seed(seed, "decay", a),
                                          exact=cfg.exact,
                                          backend=_resolve_backend(cfg))
        rows.append(DecayCSVRow(d.p, d.a, d.q, d.word, d.trials,
                                float(d.fraction), d.scaled))
    _write_out(cfg, emit_csv(rows))
    _maybe_plot(cfg, "decay")
    return 0


def _cmd_audit(cfg) -> int:
    rows = algdata.audit_table1()
    lines = [AUDIT_HEADER]
    bad = 0
    for r in rows:
        i = r.info
        rec = "" if r.recomputed is None else str(r.recomputed)
        if r.match is None:
            flag = "skip"
        elif r.match:
            flag = "true"
        else:
            flag = "false"
            bad += 1
        lines.append(f"{i.group.name},{i.case},{i.order},{i.label},"
                     f"{i.dim},{rec},{flag}")
    _write_out(cfg, "\n".join(lines) + "\n")
    return 1 if bad else 0


def _single_q(cfg) -> int:
    qs = _int_list(cfg.q, "q")
    if len(qs) != 1:
        raise InvalidConfig("this command wants exactly one q")
    return qs[0]


# -------------------------------------------------------------- driver

class _Parser(argparse.ArgumentParser):
    """argparse reserves exit code 2 for usage errors; this project uses
    2 for cap overflows, so usage failures exit 3 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(3)


def build_parser() -> _Parser:
    ap = _Parser(prog="liegen",
                 description="generation probabilities of matrix groups "
                             "over finite fields")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", default=None,
                        help="key=value file with defaults for any flag")
        sp.add_argument("--save-config", default=None,
                        help="write the effective configuration here")
        sp.add_argument("--out", default=None, help="output path, - for "
                        "stdout")
        return sp

    def common(sp, trials=True):
        sp.add_argument("--family", default=None,
                        help="SL2/SL3/SP4 or PSL2/PSL3/PSP4")
        sp.add_argument("--q", default=None, help="field size (comma "
                        "list for sweep)")
        sp.add_argument("--r", default=None, help="order of the first "
                        "element")
        sp.add_argument("--s", default=None, help="order of the second "
                        "element")
        sp.add_argument("--cap", type=int, default=None,
                        help="enumeration/closure size cap")
        sp.add_argument("--backend", default=None,
                        choices=("numba", "numpy"))
        if trials:
            sp.add_argument("--trials", type=int, default=None)
            sp.add_argument("--seed", default=None)
            sp.add_argument("--threads", type=int, default=None)
            sp.add_argument("--block", type=int, default=None)
        sp.add_argument("--plot", default=None,
                        help="write a gnuplot script here")

    sp = add("exact", "exact generation probability by enumeration")
    common(sp, trials=False)
    sp.add_argument("--class-c", default=None, help="class label like 2a")
    sp.add_argument("--class-d", default=None, help="class label like 3a")

    sp = add("estimate", "Monte Carlo generation probability")
    common(sp)

    sp = add("sweep", "one estimate (or exact value) per q")
    common(sp)
    sp.add_argument("--exact", action="store_true", default=None,
                    help="exact value per q instead of sampling")

    sp = add("trace-field", "degree of the field generated by word traces")
    sp.add_argument("--family", default=None)
    sp.add_argument("--q", default=None)
    sp.add_argument("--rep", action="append", default=None,
                    help="matrix in row ; row form, repeatable")

    sp = add("scott-check", "dimension precondition for class pairs")
    sp.add_argument("--group", default=None, help="type like E8 or C2")
    sp.add_argument("--dims", default=None, help="two class dimensions")
    sp.add_argument("--delta", default=None,
                    help="use the rank-corrected inequality with this "
                         "defect")

    sp = add("decay", "proper-subfield fraction of word traces")
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--a", default=None, help="comma list of degrees")
    sp.add_argument("--word", default=None)
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--seed", default=None)
    sp.add_argument("--exact", action="store_true", default=None,
                    help="count every pair instead of sampling")
    sp.add_argument("--backend", default=None,
                    choices=("numba", "numpy"))
    sp.add_argument("--plot", default=None,
                    help="write a gnuplot script here")

    add("audit-table1", "recompute the class table and report mismatches")
    return ap


_FLAG_KEYS = tuple(_DEFAULTS)


def config_from_args(ns) -> ExperimentConfig:
    if getattr(ns, "config", None):
        with open(ns.config) as fh:
            cfg = parse_config(fh.read())
    else:
        cfg = default_config()
    cfg = replace(cfg, command=ns.command)
    for key in _FLAG_KEYS:
        if key == "command":
            continue
        val = getattr(ns, key, None)
        if val is None:
            continue
        cfg = replace(cfg, **{key: _TYPES[key](val)})
    return cfg


def run(cfg: ExperimentConfig, reps=None) -> int:
    handlers = {
        "exact": _cmd_exact,
        "estimate": _cmd_estimate,
        "sweep": _cmd_sweep,
        "scott-check": _cmd_scott,
        "decay": _cmd_decay,
        "audit-table1": _cmd_audit,
    }
    if cfg.command == "trace-field":
        return _cmd_trace_field(cfg, reps or [])
    if cfg.command not in handlers:
        raise InvalidConfig(f"unknown command {cfg.command!r}")
    return handlers[cfg.command](cfg)


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        if getattr(ns, "save_config", None):
            with open(ns.save_config, "w") as fh:
                fh.write(serialize_config(cfg))
        code = run(cfg, reps=getattr(ns, "rep", None))
    except CapExceeded as e:
        sys.stderr.write(f"liegen: cap exceeded: {e}\n")
        return 2
    except InvalidConfig as e:
        sys.stderr.write(f"liegen: invalid config: {e}\n")
        return 3
    return code


if __name__ == "__main__":
    sys.exit(main())
