"""Declarative command-line front end.

One process runs one job, read from a structured text file and resolved to
deterministic artifacts.  Job files hold one ``key: value`` pair per line;
blank lines and lines starting with ``#`` are ignored.  The first two keys
are mandatory::

    schema: 1
    command: classify | solve | counterexample | probe | verify

Remaining keys (all optional unless marked required; unknown or inapplicable
keys are rejected with a line diagnostic):

  model          "Torus1" | "SU2" | "CustomTable <path>"       (default SU2)
  c              drift rows "n re im; n re im; ..." — exact fractions allowed
                 (required for every command)
  q              zero-order term "re im", exact fractions allowed (default 0 0)
  tol            solve/recipe/verify tolerance (default 1e-8)
  grid_size      time grid override, 0 = automatic (default 0)
  max_label      truncation for classify/probe (default 30)
  scan_k         frequency-box half-width for classify/probe (default 200)
  m_grid         weights exponents for the bound scan (default "0 1 2 4")
  bound_floor    heuristic pass level for classify (default 1e-6)
  branch_policy  solve integration branch: auto|plus|minus (default auto)
  rhs            solve forcing: "empty" or a coefficient CSV path
  recipe         counterexample recipe: homogeneous_resonant |
                 small_gap_singular | sign_change_singular (required there)
  count          representations for recipes 1 and 3 (default 8)
  witnesses      slots "label r; label r; ..." for small_gap_singular
  variant        sign-change variant auto|b0pos|b0neg (default auto)
  liouville_value  optional probe of rational approximability (number)
  liouville_depth  continued-fraction depth for the probe (default 30)
  u_field        verify: coefficient CSV of the claimed solution (required)
  f_field        verify: coefficient CSV of the forcing ("" = zero field)
  report / u_dump / f_dump / decay_table / summary
                 artifact file names inside --out (defaults report.txt,
                 u_field.csv, f_field.csv, decay.csv, summary.csv)

Input paths are resolved against the job file's directory; artifacts land in
``--out``.  Every artifact embeds the fully resolved job (defaults included)
as ``# job.<key>: <value>`` comment lines, and re-running a job reproduces
every artifact byte for byte.  Exit status: 0 on success, 2 when a classify
verdict is Undecided, 1 on any error (including inapplicable recipes and
failed verifications).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .analysis import decay_classify
from .classifier import Decision, classify, explain
from .counterexamples import (CounterexampleReport, homogeneous_resonant,
                              sign_change_singular, small_gap_singular,
                              verify_report)
from .diophantine import (ArithmeticInput, liouville_probe, lower_bound_scan,
                          resonant_set, split_q)
from .errors import HypoellError, InsufficientData, RecipeInapplicable
from .fields import CoefficientField
from .modesolver import BranchPolicy, solve_field
from .spectra import SU2, CustomTable, Torus1
from .torusfn import TrigPoly

SCHEMA_VERSION = 1

_COMMANDS = ("classify", "solve", "counterexample", "probe", "verify")
_RECIPES = ("homogeneous_resonant", "small_gap_singular",
            "sign_change_singular")
_BRANCHES = {"auto": BranchPolicy.AUTO, "plus": BranchPolicy.FORCE_PLUS,
             "minus": BranchPolicy.FORCE_MINUS}


class JobError(Exception):
    """A job file problem, pinned to a line and field when known."""

    def __init__(self, message: str, line: int | None = None,
                 field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"({', '.join(where)}) " if where else ""
        super().__init__(prefix + message)


# field -> (commands it applies to, default string or None if required,
#           None meaning "applies to every command")
_FIELDS: dict[str, tuple[tuple[str, ...] | None, str | None]] = {
    "schema": (None, None),
    "command": (None, None),
    "model": (None, "SU2"),
    "c": (None, None),
    "q": (None, "0 0"),
    "tol": (("solve", "counterexample", "verify"), "1e-8"),
    "grid_size": (("classify", "solve", "counterexample"), "0"),
    "max_label": (("classify", "probe"), "30"),
    "scan_k": (("classify", "probe"), "200"),
    "m_grid": (("classify", "probe"), "0 1 2 4"),
    "bound_floor": (("classify",), "1e-6"),
    "branch_policy": (("solve",), "auto"),
    "rhs": (("solve",), "empty"),
    "recipe": (("counterexample",), None),
    "count": (("counterexample",), "8"),
    "witnesses": (("counterexample",), ""),
    "variant": (("counterexample",), "auto"),
    "liouville_value": (("probe",), ""),
    "liouville_depth": (("probe",), "30"),
    "u_field": (("verify",), None),
    "f_field": (("verify",), ""),
    "report": (None, "report.txt"),
    "u_dump": (("solve", "counterexample"), "u_field.csv"),
    "f_dump": (("counterexample",), "f_field.csv"),
    "decay_table": (("solve", "counterexample", "verify"), "decay.csv"),
    "summary": (("counterexample",), "summary.csv"),
}

_REQUIRED_BY_COMMAND = {
    "classify": ("c",),
    "solve": ("c",),
    "counterexample": ("c", "recipe"),
    "probe": ("c",),
    "verify": ("c", "u_field"),
}


@dataclass
class JobSpec:
    """A validated job: typed values plus the resolved raw strings."""

    command: str
    values: dict
    resolved: dict      # field -> canonical string, defaults included
    lines: dict         # field -> source line number (absent for defaults)


def _parse_int(raw: str, field: str, line: int | None, lo: int = 0) -> int:
    try:
        v = int(raw)
    except ValueError:
        raise JobError(f"expected an integer, got {raw!r}", line, field)
    if v < lo:
        raise JobError(f"must be >= {lo}, got {v}", line, field)
    return v


def _parse_float(raw: str, field: str, line: int | None) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise JobError(f"expected a number, got {raw!r}", line, field)
    if not (v == v and abs(v) != float("inf")):
        raise JobError("must be finite", line, field)
    return v


def _parse_scalar_token(tok: str, field: str, line: int | None):
    """An exact-capable real: int, fraction 'p/q', or decimal float."""
    try:
        if "/" in tok or "." not in tok and "e" not in tok.lower():
            Fraction(tok)
            return tok                # keep the exact string form
        return float(tok)
    except (ValueError, ZeroDivisionError):
        raise JobError(f"expected a number or fraction, got {tok!r}",
                       line, field)


def _parse_c(raw: str, field: str, line: int | None) -> TrigPoly:
    rows = []
    for part in raw.split(";"):
        part = part.strip()
        if not part:
            continue
        toks = part.split()
        if len(toks) != 3:
            raise JobError(f"each drift row needs 'n re im', got {part!r}",
                           line, field)
        n = _parse_int(toks[0], field, line, lo=-10**9)
        re_v = _parse_scalar_token(toks[1], field, line)
        im_v = _parse_scalar_token(toks[2], field, line)
        rows.append((n, re_v, im_v))
    if not rows:
        raise JobError("the drift needs at least one row", line, field)
    try:
        return TrigPoly.from_rows(rows)
    except HypoellError as exc:
        raise JobError(str(exc), line, field)


def _parse_q(raw: str, field: str, line: int | None):
    toks = raw.split()
    if len(toks) != 2:
        raise JobError(f"q needs two components 're im', got {raw!r}",
                       line, field)
    return (_parse_scalar_token(toks[0], field, line),
            _parse_scalar_token(toks[1], field, line))


def _parse_witnesses(raw: str, field: str, line: int | None):
    out = []
    for part in raw.split(";"):
        part = part.strip()
        if not part:
            continue
        toks = part.split()
        if len(toks) != 2:
            raise JobError(f"each witness needs 'label r', got {part!r}",
                           line, field)
        out.append((_parse_int(toks[0], field, line, lo=-10**9),
                    _parse_int(toks[1], field, line)))
    return out


def _parse_m_grid(raw: str, field: str, line: int | None):
    toks = raw.replace(",", " ").split()
    if not toks:
        raise JobError("m_grid needs at least one exponent", line, field)
    return tuple(_parse_float(t, field, line) for t in toks)


def _build_model(raw: str, field: str, line: int | None, base_dir: str):
    toks = raw.split(None, 1)
    kind = toks[0]
    if kind == "Torus1":
        if len(toks) > 1:
            raise JobError("Torus1 takes no argument", line, field)
        return Torus1()
    if kind == "SU2":
        if len(toks) > 1:
            raise JobError("SU2 takes no argument", line, field)
        return SU2()
    if kind == "CustomTable":
        if len(toks) != 2:
            raise JobError("CustomTable needs a table file path", line, field)
        path = os.path.join(base_dir, toks[1].strip())
        try:
            with open(path, "r") as fh:
                text = fh.read()
        except OSError as exc:
            raise JobError(f"cannot read table file: {exc}", line, field)
        try:
            return CustomTable.from_text(text)
        except HypoellError as exc:
            raise JobError(f"bad table file: {exc}", line, field)
    raise JobError(f"unknown model kind {kind!r} "
                   "(expected Torus1, SU2, or CustomTable <path>)",
                   line, field)


def parse_job(text: str) -> JobSpec:
    """Parse and validate a job file; unknown or duplicate keys reject."""
    raw: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if ":" not in stripped:
            raise JobError("expected 'key: value'", line=lineno)
        key, _, value = stripped.partition(":")
        key, value = key.strip(), value.strip()
        if key not in _FIELDS:
            raise JobError(f"unknown field {key!r}", line=lineno, field=key)
        if key in raw:
            raise JobError("duplicate field", line=lineno, field=key)
        raw[key] = value
        lines[key] = lineno

    if "schema" not in raw:
        raise JobError("missing required field", field="schema")
    if raw["schema"] != str(SCHEMA_VERSION):
        raise JobError(f"unsupported schema {raw['schema']!r}; "
                       f"this build speaks schema {SCHEMA_VERSION}",
                       lines.get("schema"), "schema")
    if "command" not in raw:
        raise JobError("missing required field", field="command")
    command = raw["command"]
    if command not in _COMMANDS:
        raise JobError(f"unknown command {command!r}; expected one of "
                       + ", ".join(_COMMANDS), lines.get("command"), "command")

    for key in raw:
        applies, _ = _FIELDS[key]
        if applies is not None and command not in applies:
            raise JobError(f"does not apply to command '{command}'",
                           lines.get(key), key)
    for key in _REQUIRED_BY_COMMAND[command]:
        if key not in raw or not raw[key].strip():
            raise JobError(f"required for command '{command}'",
                           lines.get(key), key)

    resolved: dict[str, str] = {}
    for key, (applies, default) in _FIELDS.items():
        if applies is not None and command not in applies:
            continue
        if key in raw:
            resolved[key] = raw[key]
        elif default is not None:
            resolved[key] = default
    # schema/command have no defaults but are always present by now
    resolved["schema"] = raw["schema"]
    resolved["command"] = command

    values: dict = {"command": command}
    ln = lines.get
    values["tol"] = _parse_float(resolved.get("tol", "1e-8"), "tol", ln("tol"))
    if values["tol"] <= 0:
        raise JobError("must be positive", ln("tol"), "tol")
    if "grid_size" in resolved:
        g = _parse_int(resolved["grid_size"], "grid_size", ln("grid_size"))
        if g and g < 4:
            raise JobError("grid_size must be 0 (auto) or >= 4",
                           ln("grid_size"), "grid_size")
        values["grid_size"] = g
    if "max_label" in resolved:
        values["max_label"] = _parse_int(resolved["max_label"], "max_label",
                                         ln("max_label"), lo=0)
    if "scan_k" in resolved:
        values["scan_k"] = _parse_int(resolved["scan_k"], "scan_k",
                                      ln("scan_k"), lo=1)
    if "m_grid" in resolved:
        values["m_grid"] = _parse_m_grid(resolved["m_grid"], "m_grid",
                                         ln("m_grid"))
    if "bound_floor" in resolved:
        values["bound_floor"] = _parse_float(resolved["bound_floor"],
                                             "bound_floor", ln("bound_floor"))
    if "branch_policy" in resolved:
        if resolved["branch_policy"] not in _BRANCHES:
            raise JobError("expected auto, plus, or minus",
                           ln("branch_policy"), "branch_policy")
        values["branch_policy"] = _BRANCHES[resolved["branch_policy"]]
    if "recipe" in resolved:
        if resolved["recipe"] not in _RECIPES:
            raise JobError("expected one of " + ", ".join(_RECIPES),
                           ln("recipe"), "recipe")
        values["recipe"] = resolved["recipe"]
    if "count" in resolved:
        values["count"] = _parse_int(resolved["count"], "count",
                                     ln("count"), lo=1)
    if "witnesses" in resolved:
        values["witnesses"] = _parse_witnesses(resolved["witnesses"],
                                               "witnesses", ln("witnesses"))
    if "variant" in resolved:
        if resolved["variant"] not in ("auto", "b0pos", "b0neg"):
            raise JobError("expected auto, b0pos, or b0neg",
                           ln("variant"), "variant")
        values["variant"] = resolved["variant"]
    if "liouville_depth" in resolved:
        values["liouville_depth"] = _parse_int(
            resolved["liouville_depth"], "liouville_depth",
            ln("liouville_depth"), lo=1)
    if resolved.get("liouville_value"):
        values["liouville_value"] = _parse_scalar_token(
            resolved["liouville_value"], "liouville_value",
            ln("liouville_value"))
    values["q"] = _parse_q(resolved["q"], "q", ln("q"))
    values["c"] = _parse_c(resolved["c"], "c", ln("c"))
    values["model_raw"] = resolved["model"]
    values["model_line"] = ln("model")
    for key in ("rhs", "u_field", "f_field", "report", "u_dump", "f_dump",
                "decay_table", "summary"):
        if key in resolved:
            values[key] = resolved[key]
    return JobSpec(command=command, values=values, resolved=resolved,
                   lines=lines)


# --------------------------------------------------------------------------
# artifact plumbing
# --------------------------------------------------------------------------

def _job_header(resolved: dict) -> str:
    lines = [f"# job.{key}: {resolved[key]}" for key in resolved]
    return "\n".join(lines) + "\n"


def _write_text(path: str, header: str, body: str) -> None:
    with open(path, "w") as fh:
        fh.write(header)
        fh.write(body if body.endswith("\n") or not body else body + "\n")


def _dump_field(field: CoefficientField, path: str, header: str) -> None:
    field.dump_csv(path)
    with open(path, "r") as fh:
        content = fh.read()
    with open(path, "w") as fh:
        fh.write(header)
        fh.write(content)


def _decay_body(field: CoefficientField) -> str:
    try:
        profile = decay_classify(field)
    except InsufficientData as exc:
        return f"# no decay table: {exc}\n"
    return f"# classification: {profile.describe()}\n" + profile.to_table()


# --------------------------------------------------------------------------
# command implementations
# --------------------------------------------------------------------------

def _cmd_classify(job: JobSpec, model, out: str, header: str,
                  verbose: bool) -> int:
    v = job.values
    kwargs = {"max_label": v["max_label"], "scan_k": v["scan_k"],
              "m_grid": v["m_grid"], "bound_floor": v["bound_floor"]}
    if v.get("grid_size"):
        kwargs["grid_size"] = v["grid_size"]
    verdict = classify(model, v["c"], v["q"], **kwargs)
    body = explain(verdict)
    _write_text(os.path.join(out, v["report"]), header, body)
    if verbose:
        print(body)
    else:
        print(f"decision: {verdict.decision.value} [{verdict.rigor.value}]")
    return 2 if verdict.decision is Decision.UNDECIDED else 0


def _q_complex(q) -> complex:
    q_re, q_im = split_q(q)
    return complex(float(Fraction(q_re)) if isinstance(q_re, str) else q_re,
                   float(Fraction(q_im)) if isinstance(q_im, str) else q_im)


def _cmd_solve(job: JobSpec, model, out: str, header: str, base: str,
               threads: int | None, verbose: bool) -> int:
    v = job.values
    if v["rhs"] == "empty":
        f = CoefficientField(model, v["grid_size"] or 256, tol=v["tol"])
    else:
        f = CoefficientField.load_csv(os.path.join(base, v["rhs"]),
                                      model=model)
    u, issues = solve_field(model, v["c"], _q_complex(v["q"]), f,
                            tol=v["tol"], branch_policy=v["branch_policy"],
                            threads=threads)
    _dump_field(u, os.path.join(out, v["u_dump"]), header)
    _write_text(os.path.join(out, v["decay_table"]), header, _decay_body(u))
    lines = [f"modes solved: {len(u)} of {len(f)} requested",
             f"issues: {len(issues)}"]
    lines += [f"  {issue}" for issue in issues]
    _write_text(os.path.join(out, v["report"]), header, "\n".join(lines))
    if verbose:
        print("\n".join(lines))
    return 0


def _cmd_counterexample(job: JobSpec, model, out: str, header: str,
                        verbose: bool) -> int:
    v = job.values
    kwargs = {"tol": v["tol"]}
    if v.get("grid_size"):
        kwargs["grid_size"] = v["grid_size"]
    if v["recipe"] == "homogeneous_resonant":
        rep = homogeneous_resonant(model, v["c"], v["q"], v["count"], **kwargs)
    elif v["recipe"] == "small_gap_singular":
        if not v["witnesses"]:
            raise JobError("required when recipe is small_gap_singular",
                           job.lines.get("witnesses"), "witnesses")
        rep = small_gap_singular(model, v["c"], v["q"], v["witnesses"],
                                 **kwargs)
    else:
        rep = sign_change_singular(model, v["c"], v["q"], v["count"],
                                   v["variant"], **kwargs)
    summary = verify_report(rep)
    _dump_field(rep.u_field, os.path.join(out, v["u_dump"]), header)
    _dump_field(rep.f_field, os.path.join(out, v["f_dump"]), header)
    _write_text(os.path.join(out, v["summary"]), header, rep.summary_table())
    _write_text(os.path.join(out, v["decay_table"]), header,
                _decay_body(rep.u_field))
    body = rep.describe() + "\n\n" + summary.describe()
    _write_text(os.path.join(out, v["report"]), header, body)
    if verbose:
        print(body)
    else:
        print(f"{rep.recipe}: {len(rep.records)} representations, "
              + ("all checks pass" if rep.all_checks_pass and summary.passed
                 else "CHECKS FAILED"))
    return 0 if rep.all_checks_pass and summary.passed else 1


def _cmd_probe(job: JobSpec, model, out: str, header: str,
               verbose: bool) -> int:
    v = job.values
    q_re, q_im = split_q(v["q"])
    arith = ArithmeticInput.from_operator(v["c"], q_re, q_im)
    lines = [arith.describe(), ""]
    res = resonant_set(model, arith, max_label=v["max_label"])
    lines.append(res.describe())
    for m in v["m_grid"]:
        scan = lower_bound_scan(model, arith, m, v["scan_k"], v["max_label"])
        lines.append(scan.describe())
    if "liouville_value" in v:
        probe = liouville_probe(v["liouville_value"], v["liouville_depth"])
        lines.append(f"approximability of {v['liouville_value']}: "
                     + probe.describe())
    body = "\n".join(lines)
    _write_text(os.path.join(out, v["report"]), header, body)
    if verbose:
        print(body)
    return 0


def _cmd_verify(job: JobSpec, model, out: str, header: str, base: str,
                verbose: bool) -> int:
    v = job.values
    u_field = CoefficientField.load_csv(os.path.join(base, v["u_field"]),
                                        model=model)
    if v["f_field"]:
        f_field = CoefficientField.load_csv(os.path.join(base, v["f_field"]),
                                            model=model)
    else:
        f_field = CoefficientField(model, u_field.grid_size)
    shim = CounterexampleReport(
        recipe="loaded", model=model, c_used=v["c"],
        q_used=_q_complex(v["q"]),
        u_field=u_field, f_field=f_field, records=(),
        params={"tol": v["tol"]}, checks=())
    summary = verify_report(shim)
    _write_text(os.path.join(out, v["report"]), header, summary.describe())
    _write_text(os.path.join(out, v["decay_table"]), header,
                _decay_body(u_field))
    if verbose:
        print(summary.describe())
    else:
        print("verification: " + ("PASS" if summary.passed else "FAIL"))
    return 0 if summary.passed else 1


def run(job: JobSpec, out_dir: str, base_dir: str,
        threads: int | None = None, verbose: bool = False) -> int:
    """Execute a validated job; returns the process exit status."""
    os.makedirs(out_dir, exist_ok=True)
    model = _build_model(job.values["model_raw"], "model",
                         job.values["model_line"], base_dir)
    header = _job_header(job.resolved)
    if job.command == "classify":
        return _cmd_classify(job, model, out_dir, header, verbose)
    if job.command == "solve":
        return _cmd_solve(job, model, out_dir, header, base_dir, threads,
                          verbose)
    if job.command == "counterexample":
        return _cmd_counterexample(job, model, out_dir, header, verbose)
    if job.command == "probe":
        return _cmd_probe(job, model, out_dir, header, verbose)
    return _cmd_verify(job, model, out_dir, header, base_dir, verbose)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="hypoell",
        description="Global hypoellipticity toolkit: run one declarative "
                    "job (classify / solve / counterexample / probe / "
                    "verify) and emit deterministic artifacts.")
    ap.add_argument("--job", required=True, help="path to the job file")
    ap.add_argument("--out", default=".", help="artifact directory")
    ap.add_argument("--threads", type=int, default=None,
                    help="worker threads for field solves")
    ap.add_argument("--verbose", action="store_true",
                    help="echo full reports to stdout")
    ns = ap.parse_args(argv)
    try:
        with open(ns.job, "r") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"cannot read job file: {exc}", file=sys.stderr)
        return 1
    base_dir = os.path.dirname(os.path.abspath(ns.job))
    try:
        job = parse_job(text)
        return run(job, out_dir=ns.out, base_dir=base_dir,
                   threads=ns.threads, verbose=ns.verbose)
    except JobError as exc:
        print(f"job error: {exc}", file=sys.stderr)
        return 1
    except RecipeInapplicable as exc:
        print(f"recipe inapplicable: {exc}", file=sys.stderr)
        return 1
    except HypoellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":       # pragma: no cover
    sys.exit(main())
