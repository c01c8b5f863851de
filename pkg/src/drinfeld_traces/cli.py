"""Command-line front end: traces, tables, isogeny censuses and spectra.

Exit codes: 0 ok, 2 bad input, 3 weight cap exceeded, 4 spectrum not
determined by traces (dimension >= p).
"""

import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import wraps

import click

from . import spectra
from .errors import CapExceeded, DimensionAtLeastP, DrinfeldError
from .gf import field_create, field_for_q
from .isogeny import iso_table
from .polyring import PolyA, format_poly
from .traces import DEFAULT_CAP, TraceQuery, trace_auto

EXIT_USAGE, EXIT_CAP, EXIT_SPECTRAL = 2, 3, 4


def _fail(msg, code):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _guarded(fn):
    @wraps(fn)
    def run(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CapExceeded as exc:
            _fail(exc, EXIT_CAP)
        except DimensionAtLeastP as exc:
            _fail(exc, EXIT_SPECTRAL)
        except (DrinfeldError, ValueError) as exc:
            _fail(exc, EXIT_USAGE)
    return run


# --- option parsing ------------------------------------------------------------

def parse_range(text):
    """'a:b' or 'a:b:step' (inclusive) or a comma list."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        parts = [int(x) for x in text.split(":")]
        if len(parts) == 2:
            parts.append(1)
        if len(parts) != 3 or parts[2] <= 0:
            raise click.BadParameter(f"bad range {text!r}; use start:stop[:step]")
        return list(range(parts[0], parts[1] + 1, parts[2]))
    return [int(x) for x in text.split(",")]


def resolve_field(q, p, r, modulus):
    if q is not None:
        return field_for_q(q, modulus)
    if p is not None:
        return field_create(p, r or 1, modulus)
    raise click.UsageError("give the field with --q, or with --p (and --r)")


def field_options(fn):
    fn = click.option("--q", type=int, help="Field size (a prime power).")(fn)
    fn = click.option("--p", type=int, help="Characteristic, with --r.")(fn)
    fn = click.option("--r", type=int, help="Extension degree over F_p.")(fn)
    fn = click.option("--modulus", help="Irreducible modulus over F_p, e.g. 'x^2+1'.")(fn)
    return fn


def query_options(fn):
    fn = click.option("--prime", default="T", show_default=True, help="Monic irreducible prime.")(fn)
    fn = click.option("--n", "power", type=int, default=1, show_default=True,
                      help="Power of the Hecke operator.")(fn)
    fn = click.option("--l", "ltype", type=int, default=1, show_default=True, help="Type.")(fn)
    fn = click.option("--cap", type=int, default=DEFAULT_CAP, show_default=True,
                      help="Largest n*deg(prime) for the isogeny-sum method.")(fn)
    return fn


def format_option(default="text"):
    return click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]),
                        default=default, show_default=True)


def jobs_option(fn):
    return click.option("--jobs", type=int, default=1, show_default=True,
                        help="Worker processes for tables and scans.")(fn)


def weights(k, k_range):
    if k_range is not None:
        return parse_range(k_range)
    if k is None:
        raise click.UsageError("give --k or --k-range")
    return [k]


def field_header(F):
    if F.is_prime_field:
        return None
    return f"# F_{F.q} = F_{F.p}[x]/({F.modulus_str()})"


def _echo_header(F, fmt):
    head = field_header(F)
    if head is None or fmt == "json":
        return
    # keep CSV bodies clean for diffing; the header goes to stderr there
    click.echo(head, err=(fmt == "csv"))


def _pmap(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# --- workers (module level so they pickle) ----------------------------------------

def _trace_cell(task):
    p, r, modulus, prime_text, n, k, l, cap, unscaled = task
    F = field_create(p, r, modulus)
    prime = PolyA.parse(F, prime_text)
    res = trace_auto(TraceQuery(prime, n, k, l, cap))
    return res.to_dict(unscaled=unscaled)


def _field_key(F):
    return F.p, F.r, F.modulus


# --- commands -----------------------------------------------------------------

@click.group()
def main():
    """Traces and spectra of Hecke operators on Drinfeld cusp forms."""


@main.command()
@field_options
@query_options
@click.option("--k", type=int, help="Weight.")
@click.option("--k-range", help="Weights start:stop[:step], inclusive.")
@click.option("--unscaled", is_flag=True, help="Multiply back by prime^n.")
@format_option()
@jobs_option
@_guarded
def trace(q, p, r, modulus, prime, power, ltype, cap, k, k_range, unscaled, fmt, jobs):
    """Tr(T_prime^n | S_{k,l})."""
    F = resolve_field(q, p, r, modulus)
    pr = PolyA.parse(F, prime)
    TraceQuery(pr, power, 3, ltype, cap).validate(check_cap=F.p != 2)
    ks = weights(k, k_range)
    tasks = [(*_field_key(F), prime, power, kk, ltype, cap, unscaled) for kk in ks]
    results = _pmap(_trace_cell, tasks, jobs)
    _echo_header(F, fmt)
    if fmt == "json":
        click.echo(json.dumps(results if len(results) != 1 else results[0], indent=2))
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "l", "trace", "method"])
        for res in results:
            w.writerow([res["k"], res["l"], res["trace"], res["method"]])
        click.echo(buf.getvalue(), nl=False)
    else:
        for res in results:
            prefix = f"k={res['k']}: " if len(results) > 1 else ""
            click.echo(f"{prefix}{res['trace']}  [{res['method']}]")


def _compact(trace_text, F):
    return format_poly(PolyA.parse(F, trace_text), compact=True)


@main.command()
@click.option("--qs", default="3,5,7,9", show_default=True, help="Comma list of field sizes.")
@click.option("--prime", default="T", show_default=True)
@click.option("--n", "power", type=int, default=1, show_default=True)
@click.option("--l", "ltype", type=int, default=1, show_default=True)
@click.option("--k-range", default="4:62:2", show_default=True)
@click.option("--cap", type=int, default=DEFAULT_CAP, show_default=True)
@format_option("csv")
@jobs_option
@_guarded
def table(qs, prime, power, ltype, k_range, cap, fmt, jobs):
    """Trace table: one row per weight, one column per q."""
    fields = [field_for_q(int(x)) for x in qs.split(",") if x.strip()]
    ks = parse_range(k_range)
    tasks = [(*_field_key(F), prime, power, k, ltype, cap, False) for k in ks for F in fields]
    flat = _pmap(_trace_cell, tasks, jobs)
    grid = [flat[i * len(fields):(i + 1) * len(fields)] for i in range(len(ks))]
    for F in fields:
        _echo_header(F, fmt)
    if fmt == "json":
        click.echo(json.dumps(flat, indent=2))
        return
    header = ["k"] + [f"q={F.q}" for F in fields]
    rows = [[str(k)] + [_compact(res["trace"], F) for res, F in zip(row, fields)]
            for k, row in zip(ks, grid)]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        click.echo(buf.getvalue(), nl=False)
    else:
        widths = [max(len(x) for x in col) for col in zip(header, *rows)]
        for row in [header] + rows:
            click.echo("  ".join(x.rjust(wd) for x, wd in zip(row, widths)).rstrip())


@main.command()
@field_options
@click.option("--prime", default="T", show_default=True)
@click.option("--n", "power", type=int, default=1, show_default=True)
@click.option("--cap", type=int, default=DEFAULT_CAP, show_default=True)
@format_option("csv")
@_guarded
def census(q, p, r, modulus, prime, power, cap, fmt):
    """Every Weil class X^2 - aX + b prime^n with #Iso(a, b) mod p."""
    F = resolve_field(q, p, r, modulus)
    pr = PolyA.parse(F, prime)
    TraceQuery(pr, power, 3, 1, cap).validate()
    rows = [(format_poly(w.a), F.format(w.b), w.case, c) for w, c in iso_table(pr, power)]
    _echo_header(F, fmt)
    if fmt == "json":
        click.echo(json.dumps({"q": F.q, "modulus": F.modulus_str(), "prime": prime, "n": power,
                               "rows": [{"a": a, "b": b, "case": cs, "count_mod_p": c}
                                        for a, b, cs, c in rows]}, indent=2))
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "case", "count_mod_p"])
    w.writerows(rows)
    click.echo(buf.getvalue(), nl=False)


@main.command()
@field_options
@click.option("--prime", default="T", show_default=True)
@click.option("--n", "power", type=int, default=1, show_default=True)
@click.option("--a", "a_text", required=True, help="Trace coefficient a in F_q[T].")
@click.option("--b", "b_text", required=True, help="Unit b in F_q.")
@click.option("--cap", type=int, default=DEFAULT_CAP, show_default=True)
@_guarded
def iso(q, p, r, modulus, prime, power, a_text, b_text, cap):
    """#Iso(a, b) mod p for one pair."""
    F = resolve_field(q, p, r, modulus)
    pr = PolyA.parse(F, prime)
    TraceQuery(pr, power, 3, 1, cap).validate()
    a = PolyA.parse(F, a_text)
    b = F.parse(b_text)
    if b == 0:
        raise click.BadParameter("b must be a unit")
    click.echo(iso_table(pr, power).count(a, b))


def _spectrum_text(rep):
    d = rep.to_dict()
    lines = [f"dim {d['dim']}"]
    lines.append("traces " + ", ".join(d["traces"]))
    if d["charpoly"] is not None:
        lines.append(f"charpoly {d['charpoly']}")
    if "recurrence" in d:
        lines.append(f"recurrence {d['recurrence']}")
    lines.append(f"hankel_det {d['hankel_det']}  repeated={d['repeated']}")
    for v, segs in d["slopes"].items():
        parts = [f"{s['slope']} (|{s['abs_slope']}|) x{s['multiplicity']}" for s in segs]
        lines.append(f"slopes[{v}] " + ", ".join(parts))
    if "odd_mult_eigs" in d:
        lines.append("odd multiplicity " + ", ".join(d["odd_mult_eigs"]))
    for note in d.get("notes", []):
        lines.append(f"note: {note}")
    return "\n".join(lines)


@main.command()
@field_options
@query_options
@click.option("--k", type=int, required=True)
@click.option("--fallback", is_flag=True, help="Allow dim >= p (partial spectrum).")
@format_option("json")
@_guarded
def spectrum(q, p, r, modulus, prime, power, ltype, cap, k, fallback, fmt):
    """Characteristic polynomial, Hankel test and slopes of T_prime^n on S_{k,l}."""
    F = resolve_field(q, p, r, modulus)
    rep = spectra.spectrum(PolyA.parse(F, prime), k, ltype, power, cap, fallback)
    _echo_header(F, fmt)
    if fmt == "json":
        click.echo(json.dumps(rep.to_dict(), indent=2))
    else:
        click.echo(_spectrum_text(rep))


def _slope_cell(task):
    p, r, modulus, prime_text, n, k, l, cap, fallback = task
    F = field_create(p, r, modulus)
    pr = PolyA.parse(F, prime_text)
    try:
        rep = spectra.spectrum(pr, k, l, n, cap, fallback)
    except DimensionAtLeastP as exc:
        return {"k": k, "skipped": str(exc)}
    d = rep.to_dict()
    return {"k": k, "dim": d["dim"], "slopes": d["slopes"], "source": d["slope_source"]}


@main.command()
@field_options
@query_options
@click.option("--k", type=int)
@click.option("--k-range")
@click.option("--fallback", is_flag=True)
@format_option()
@jobs_option
@_guarded
def slopes(q, p, r, modulus, prime, power, ltype, cap, k, k_range, fallback, fmt, jobs):
    """Newton-polygon slopes per weight at infinity and at the prime."""
    F = resolve_field(q, p, r, modulus)
    ks = weights(k, k_range)
    tasks = [(*_field_key(F), prime, power, kk, ltype, cap, fallback) for kk in ks]
    rows = _pmap(_slope_cell, tasks, jobs)
    if len(ks) == 1 and "skipped" in rows[0]:
        raise DimensionAtLeastP(rows[0]["skipped"])
    _echo_header(F, fmt)
    if fmt == "json":
        click.echo(json.dumps(rows, indent=2))
        return
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "valuation", "slope", "abs_slope", "multiplicity"])
        for row in rows:
            for v, segs in row.get("slopes", {}).items():
                for s in segs:
                    w.writerow([row["k"], v, s["slope"], s["abs_slope"], s["multiplicity"]])
        click.echo(buf.getvalue(), nl=False)
        return
    for row in rows:
        if "skipped" in row:
            click.echo(f"k={row['k']}: skipped ({row['skipped']})")
            continue
        for v, segs in row["slopes"].items():
            parts = ", ".join(f"{s['slope']} (|{s['abs_slope']}|) x{s['multiplicity']}"
                              for s in segs)
            click.echo(f"k={row['k']} v={v}: {parts}")


@main.command()
@field_options
@click.option("--prime", default="T", show_default=True)
@click.option("--n", "power", type=int, default=1, show_default=True)
@click.option("--l", "ltype", type=int, default=1, show_default=True)
@click.option("--k-range", default="3:60", show_default=True)
@click.option("--what", type=click.Choice(["conjecture", "repetition", "parity", "ramanujan",
                                           "oldnew"]), default="conjecture", show_default=True)
@click.option("--cap", type=int, default=DEFAULT_CAP, show_default=True)
@_guarded
def scan(q, p, r, modulus, prime, power, ltype, k_range, what, cap):
    """Report-only scans; nothing here fails on a counterexample."""
    F = resolve_field(q, p, r, modulus)
    pr = PolyA.parse(F, prime)
    ks = parse_range(k_range)
    if what == "conjecture":
        out = spectra.conjecture_scans(pr, ks, ltype, cap)
    elif what == "repetition":
        lo, hi = (min(ks), max(ks)) if ks else (3, 2)
        out = {"q": F.q, "prime": prime, "l": ltype, "k_min": lo, "k_max": hi,
               "no_repetition": spectra.no_repetition_weights(pr, hi, ltype, lo)}
    elif what == "parity":
        hi = max(ks) if ks else 0
        out = {"q": F.q, "k_max": hi, "violations": spectra.dimension_parity_scan([F.q], hi)}
    elif what == "ramanujan":
        out = spectra.ram_suff_check(pr, power, cap)
    else:
        out = [spectra.oldnew_criterion(k, ltype, pr, cap) for k in ks]
    _echo_header(F, "json")
    click.echo(json.dumps(out, indent=2))


@main.command()
@field_options
@click.option("--prime", default="T", show_default=True)
@click.option("--n", "power", type=int, default=1, show_default=True)
@click.option("--l", "ltype", type=int, default=1, show_default=True)
@click.option("--k-range", required=True)
@click.option("--cap", type=int, default=DEFAULT_CAP, show_default=True)
@_guarded
def figure(q, p, r, modulus, prime, power, ltype, k_range, cap):
    """CSV of k, deg Tr, strong bound and log_q(1 + bound - deg Tr)."""
    F = resolve_field(q, p, r, modulus)
    rows = spectra.figure_rows(PolyA.parse(F, prime), parse_range(k_range), ltype, power, cap)
    _echo_header(F, "csv")
    click.echo(spectra.figure_csv(rows), nl=False)


if __name__ == "__main__":
    main()
