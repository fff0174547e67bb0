"""The bundled corpus: system files plus recorded invariants, and a runner
that recomputes and compares them."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .arrangements import factorization_check, integer_factors, poincare_polynomial
from .flatsections import harmonic_test
from .veesys import DegenerateForm, holonomy_check, load_system, vee_check

CORPUS_DIR = Path(__file__).with_name("corpus")
EXPECTATIONS = CORPUS_DIR / "expectations.json"


class CorpusError(OSError):
    """Missing or malformed corpus data."""


def load_expectations(path: str | os.PathLike | None = None) -> dict:
    path = Path(path) if path is not None else EXPECTATIONS
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise CorpusError(f"corpus file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise CorpusError(f"malformed corpus file {path}: {exc}") from None
    base = path.parent
    for entry in data.get("entries", []):
        entry["_path"] = str(base / entry["system"])
    return data


def _poincare_coeffs(p) -> list[int]:
    return [int(p.coefficient((k,))) for k in range(p.degree() + 1)]


def run_entry(entry: dict) -> dict:
    """Recompute one corpus entry and compare with its expectations."""
    try:
        text = Path(entry["_path"]).read_text()
    except FileNotFoundError:
        raise CorpusError(f"system file not found: {entry['_path']}") from None
    sys_ = load_system(text)
    expect = entry.get("expect", {})
    row: dict = {"name": entry["name"], "hyperplanes": len(sys_), "dimension": sys_.dimension}
    try:
        report = vee_check(sys_)
        row["vee"] = report.is_vee_system
        row["holonomy_agrees"] = holonomy_check(sys_).passes == report.is_vee_system
    except DegenerateForm:
        row["vee"] = "degenerate"
        row["holonomy_agrees"] = None
    poly = poincare_polynomial(sys_)
    row["poincare"] = _poincare_coeffs(poly)
    exps = factorization_check(poly, sys_.dimension)
    row["exponents"] = exps
    if exps is None:
        peeled, rest = integer_factors(poly)
        row["unfactored"] = {"peeled": peeled, "remaining": rest}
    if "harmonic" in expect:
        h = harmonic_test(sys_)
        row["harmonic"] = h.is_harmonic
        row["degrees"] = h.degrees if h.is_harmonic else None
        if not h.is_harmonic:
            row["quasi_invariant_dims"] = {f"deg{k}": v for k, v in sorted(h.quasi_dims.items())}
    mismatches = []
    for key, want in sorted(expect.items()):
        got = row.get(key)
        if key == "degrees" and got is not None:
            got = sorted(got)
        if got != want:
            mismatches.append({"field": key, "expected": want, "computed": got})
    if row.get("holonomy_agrees") is False:
        mismatches.append({"field": "holonomy_agrees", "expected": True, "computed": False})
    row["matches"] = not mismatches
    row["mismatches"] = mismatches
    return row


def _threads() -> int:
    raw = os.environ.get("VEE_THREADS")
    cpus = os.cpu_count() or 1
    if raw is None:
        return cpus
    try:
        return max(1, int(raw))
    except ValueError:
        raise CorpusError(f"VEE_THREADS must be an integer, got {raw!r}") from None


def run_corpus(only: str | None = None, expectations: str | os.PathLike | None = None,
               threads: int | None = None) -> list[dict]:
    """Run every entry (or the entry named ``only``); rows sorted by name."""
    data = load_expectations(expectations)
    entries = data.get("entries", [])
    if only is not None:
        entries = [e for e in entries if e["name"] == only]
        if not entries:
            raise CorpusError(f"no corpus entry named {only!r}")
    for e in entries:
        if not Path(e["_path"]).exists():
            raise CorpusError(f"system file not found: {e['_path']}")
    threads = threads or _threads()
    if threads > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(entries))) as pool:
            rows = list(pool.map(run_entry, entries))
    else:
        rows = [run_entry(e) for e in entries]
    return sorted(rows, key=lambda r: r["name"])


def format_table(rows: list[dict]) -> str:
    """Plain-text summary, one line per entry."""
    header = f"{'name':<22} {'|A|':>4} {'vee':>10}  {'exponents / Poincaré':<28} {'harmonic':>8}  match"
    lines = [header, "-" * len(header)]
    for r in rows:
        if r["exponents"] is not None:
            inv = "(" + ",".join(str(b) for b in r["exponents"]) + ")"
        else:
            inv = "P=" + ",".join(str(c) for c in r["poincare"])
        harm = "" if "harmonic" not in r else ("yes" if r["harmonic"] else "no")
        lines.append(f"{r['name']:<22} {r['hyperplanes']:>4} {str(r['vee']):>10}  {inv:<28} "
                     f"{harm:>8}  {'yes' if r['matches'] else 'NO'}")
    return "\n".join(lines)


__all__ = ["CORPUS_DIR", "EXPECTATIONS", "CorpusError", "load_expectations",
           "run_entry", "run_corpus", "format_table"]
