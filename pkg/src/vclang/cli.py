"""Command surface: file formats, thin command wrappers, certificate checks.

Three line-oriented UTF-8 formats tie the commands together.  Blank lines and
anything after a ``#`` are ignored; rationals print as ``p/q`` or a bare
integer; infinite values are never written — a tuple absent from a function
block is infinite.

Language file::

    domain 6
    function t0 arity 2
    0 3 : 0
    0 4 : 1/2
    end

Instance file (function names refer to a language file; weight defaults
to 1)::

    variables 3
    term t0 0 1
    term t0 1 2 weight 2

Certificate file.  Operation tables are whitespace-separated entries in
lexicographic tuple order; the first block is the core-exposing unary
distribution over the full domain, the second the solvability witness over
the relabeled core domain 0..|B|-1::

    verdict solvable
    partition 0 1 2 | 3 4 5
    core 0 4
    fpol arity 1
    0 1 2 0 1 2 : 1
    end
    fpol arity 2
    0 0 0 1 : 1/2
    0 1 1 1 : 1/2
    end

Exit codes: 0 = command ran to a decision (either verdict; for ``verify``,
the certificate was accepted), 1 = certificate rejected, 2 = input error,
3 = budget refusal, 4 = internal invariant breach.
"""

from __future__ import annotations

import argparse
import math
import random
import re
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .algebra import (
    INF,
    FractionalOperation,
    Language,
    Operation,
    Partition,
    cost_function,
    is_fractional_polymorphism,
    op_predicate,
)
from .errors import BudgetError, InputError, InvariantError
from .fpoly import gamma_plus
from .gen import (
    COLORS,
    CnfFormula,
    Graph,
    coloring_instance,
    complete_graph,
    cycle_graph,
    graph,
    kcnf_to_csp,
    lift_language,
    lifted_instance,
    random_finite_language,
    random_instance,
)
from .meta import (
    SolvabilityVerdict,
    brute_core,
    conditional_core,
    is_solvable,
    maximal_partition,
)
from .vcsp import Instance, Term, blp_solve, lp_probe, solve_exhaustive

# ---------------------------------------------------------------------------
# Shared parsing helpers


def _lines(text: str):
    """Yield (line number, token list) for content lines."""
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InputError(f"line {no}: expected an integer, got {tok!r}") from None


def _rational(tok: str, no: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise InputError(
            f"line {no}: expected a rational like 3 or 1/2, got {tok!r}"
        ) from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from None


# ---------------------------------------------------------------------------
# Language files


def parse_language(text: str) -> Language:
    domain = None
    functions = []
    names = []
    pending = None  # (name, arity, entries, header line)
    for no, toks in _lines(text):
        if pending is not None:
            name, arity, entries, start = pending
            if toks == ["end"]:
                try:
                    functions.append(cost_function(arity, domain, entries))
                except InputError as e:
                    raise InputError(f"function {name!r} (line {start}): {e}") from None
                names.append(name)
                pending = None
            else:
                if len(toks) != arity + 2 or toks[arity] != ":":
                    raise InputError(
                        f"line {no}: expected {arity} labels, ':', and a value"
                    )
                x = tuple(_int(t, no) for t in toks[:arity])
                if x in entries:
                    raise InputError(f"line {no}: duplicate tuple {x}")
                entries[x] = _rational(toks[-1], no)
        elif toks[0] == "domain":
            if domain is not None:
                raise InputError(f"line {no}: duplicate 'domain' line")
            if len(toks) != 2:
                raise InputError(f"line {no}: expected 'domain D'")
            domain = _int(toks[1], no)
        elif toks[0] == "function":
            if domain is None:
                raise InputError(f"line {no}: 'domain D' must come first")
            if len(toks) != 4 or toks[2] != "arity":
                raise InputError(f"line {no}: expected 'function NAME arity K'")
            pending = (toks[1], _int(toks[3], no), {}, no)
        else:
            raise InputError(
                f"line {no}: expected 'domain' or 'function', got {toks[0]!r}"
            )
    if pending is not None:
        raise InputError(f"function {pending[0]!r} (line {pending[3]}) has no 'end'")
    if domain is None:
        raise InputError("language file has no 'domain D' line")
    try:
        return Language(domain, tuple(functions), tuple(names))
    except InputError as e:
        raise InputError(f"language file: {e}") from None


def print_language(language: Language) -> str:
    out = [f"domain {language.domain_size}"]
    for name, f in zip(language.names, language.functions):
        out.append(f"function {name} arity {f.arity}")
        for x in sorted(f.entries):
            out.append(" ".join(str(a) for a in x) + f" : {f.entries[x]}")
        out.append("end")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Instance files


def parse_instance(text: str, language: Language) -> Instance:
    num_vars = None
    terms = []
    for no, toks in _lines(text):
        if toks[0] == "variables":
            if num_vars is not None:
                raise InputError(f"line {no}: duplicate 'variables' line")
            if len(toks) != 2:
                raise InputError(f"line {no}: expected 'variables N'")
            num_vars = _int(toks[1], no)
        elif toks[0] == "term":
            if num_vars is None:
                raise InputError(f"line {no}: 'variables N' must come first")
            if len(toks) < 2:
                raise InputError(f"line {no}: expected 'term NAME v1 ... vk'")
            try:
                f = language.function_named(toks[1])
            except InputError as e:
                raise InputError(f"line {no}: {e}") from None
            rest = toks[2:]
            weight = Fraction(1)
            if "weight" in rest:
                i = rest.index("weight")
                if i != len(rest) - 2:
                    raise InputError(f"line {no}: 'weight p/q' must end the line")
                weight = _rational(rest[-1], no)
                rest = rest[:i]
            scope = tuple(_int(t, no) for t in rest)
            try:
                terms.append(Term(f, scope, weight))
            except InputError as e:
                raise InputError(f"line {no}: {e}") from None
        else:
            raise InputError(
                f"line {no}: expected 'variables' or 'term', got {toks[0]!r}"
            )
    if num_vars is None:
        raise InputError("instance file has no 'variables N' line")
    try:
        return Instance(num_vars, language.domain_size, tuple(terms))
    except InputError as e:
        raise InputError(f"instance file: {e}") from None


def print_instance(instance: Instance, language: Language) -> str:
    out = [f"variables {instance.num_vars}"]
    for t in instance.terms:
        try:
            name = language.names[language.functions.index(t.function)]
        except ValueError:
            raise InputError("instance term uses a function not in the language") from None
        line = f"term {name}" + "".join(f" {v}" for v in t.scope)
        if t.weight != 1:
            line += f" weight {t.weight}"
        out.append(line)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Certificate files


@dataclass(frozen=True)
class Certificate:
    """The on-disk claims: a partition, a core, and the two distributions."""

    partition_blocks: tuple[tuple[int, ...], ...]
    core: tuple[int, ...]
    omega1: FractionalOperation
    omega2: FractionalOperation


def certificate_of(verdict: SolvabilityVerdict) -> Certificate:
    if not verdict.solvable:
        raise InputError("only solvable verdicts carry a certificate")
    return Certificate(
        verdict.partition.blocks, verdict.core, verdict.omega1, verdict.omega2
    )


def print_certificate(cert: Certificate) -> str:
    out = ["verdict solvable"]
    out.append(
        "partition "
        + " | ".join(" ".join(str(a) for a in b) for b in cert.partition_blocks)
    )
    out.append("core " + " ".join(str(a) for a in cert.core))
    for omega in (cert.omega1, cert.omega2):
        out.append(f"fpol arity {omega.arity}")
        for g, w in omega.support:
            out.append(" ".join(str(v) for v in g.table) + f" : {w}")
        out.append("end")
    return "\n".join(out) + "\n"


def _root(n: int, m: int) -> int | None:
    """The exact integer d with d**m == n, if one exists."""
    if n < 1:
        return None
    d = round(n ** (1 / m))
    for c in (d - 1, d, d + 1):
        if c >= 1 and c**m == n:
            return c
    return None


def parse_certificate(text: str) -> Certificate:
    lines = list(_lines(text))
    if not lines or lines[0][1] != ["verdict", "solvable"]:
        raise InputError("certificate must open with 'verdict solvable'")
    blocks = None
    core = None
    fpols = []
    i = 1
    while i < len(lines):
        no, toks = lines[i]
        if toks[0] == "partition":
            raw, cur = [], []
            for t in toks[1:]:
                if t == "|":
                    if not cur:
                        raise InputError(f"line {no}: empty partition block")
                    raw.append(tuple(cur))
                    cur = []
                else:
                    cur.append(_int(t, no))
            if not cur:
                raise InputError(f"line {no}: empty partition block")
            raw.append(tuple(cur))
            blocks = tuple(raw)
            i += 1
        elif toks[0] == "core":
            core = tuple(_int(t, no) for t in toks[1:])
            i += 1
        elif toks[0] == "fpol":
            if len(toks) != 3 or toks[1] != "arity":
                raise InputError(f"line {no}: expected 'fpol arity M'")
            m = _int(toks[2], no)
            i += 1
            support = []
            d = None
            while i < len(lines) and lines[i][1] != ["end"]:
                eno, etoks = lines[i]
                if len(etoks) < 3 or etoks[-2] != ":":
                    raise InputError(f"line {eno}: expected 'table entries : weight'")
                table = tuple(_int(t, eno) for t in etoks[:-2])
                if d is None:
                    d = _root(len(table), m)
                    if d is None:
                        raise InputError(
                            f"line {eno}: table length {len(table)} is not d**{m}"
                        )
                try:
                    g = Operation(m, d, table)
                except InputError as e:
                    raise InputError(f"line {eno}: {e}") from None
                support.append((g, _rational(etoks[-1], eno)))
                i += 1
            if i == len(lines):
                raise InputError(f"line {no}: 'fpol' block has no 'end'")
            i += 1
            if not support:
                raise InputError(f"line {no}: empty 'fpol' block")
            try:
                fpols.append(FractionalOperation(m, d, tuple(support)))
            except InputError as e:
                raise InputError(f"fpol block at line {no}: {e}") from None
        else:
            raise InputError(f"line {no}: unexpected {toks[0]!r}")
    if blocks is None or core is None or len(fpols) != 2:
        raise InputError("certificate needs a partition, a core, and two fpol blocks")
    return Certificate(blocks, core, fpols[0], fpols[1])


def verify_certificate(language: Language, cert: Certificate) -> list[str]:
    """Every reason the certificate fails against the language; [] = accept.

    Checks the averaging inequality of both distributions exhaustively, the
    witness shape (binary symmetric idempotent for finite-valued cores,
    quaternary idempotent with a Siggers member otherwise), the support-size
    bounds, and the claims that tie them together: the partition partitions
    the domain, every unary support operation maps onto a transversal, and
    the claimed core is such an image.
    """
    d = language.domain_size
    try:
        part = Partition.from_blocks(d, cert.partition_blocks)
    except InputError as e:
        return [f"partition: {e}"]
    nb = part.num_blocks
    core = cert.core
    if len(core) != len(set(core)) or any(not 0 <= a < d for a in core):
        return ["core labels must be distinct and within the domain"]
    problems = []
    if len(core) != nb or len({part.block_of[a] for a in core}) != nb:
        problems.append("core is not a transversal of the partition")
    om1 = cert.omega1
    if om1.arity != 1 or om1.domain_size != d:
        problems.append("omega1 must be unary over the language domain")
        return problems
    for g in om1.operations():
        img = g.image()
        if len(img) != nb or len({part.block_of[a] for a in img}) != nb:
            problems.append("omega1 support contains a non-transversal operation")
            break
    if not any(tuple(sorted(g.image())) == core for g in om1.operations()):
        problems.append("no omega1 support operation has the claimed core as image")
    if not is_fractional_polymorphism(om1, language):
        problems.append("omega1 violates the averaging inequality")
    bound1 = 1 + len(gamma_plus(language, 1).entries)
    if len(om1.support) > bound1:
        problems.append(f"omega1 support exceeds the size bound {bound1}")
    if problems:
        return problems

    try:
        core_language = language.restrict(core)
    except InputError as e:
        return [f"core restriction: {e}"]
    om2 = cert.omega2
    if om2.domain_size != len(core):
        return ["omega2 must live on the relabeled core domain"]
    ops = om2.operations()
    finite = core_language.is_finite_valued
    if finite:
        if om2.arity != 2:
            problems.append("finite-valued witness must be binary")
        elif not all(op_predicate(g, "symmetric") for g in ops):
            problems.append("finite-valued witness must be symmetric")
    else:
        if om2.arity != 4:
            problems.append("general-valued witness must be quaternary")
        elif not any(op_predicate(g, "siggers") for g in ops):
            problems.append("general-valued witness needs a Siggers operation")
    if not all(op_predicate(g, "idempotent") for g in ops):
        problems.append("omega2 support must be idempotent")
    if not is_fractional_polymorphism(om2, core_language):
        problems.append("omega2 violates the averaging inequality")
    bound2 = 1 + len(gamma_plus(core_language, om2.arity).entries)
    if len(om2.support) > bound2:
        problems.append(f"omega2 support exceeds the size bound {bound2}")
    return problems


# ---------------------------------------------------------------------------
# Generator inputs: graphs and DIMACS CNF


def _graph_arg(spec: str) -> Graph:
    m = re.fullmatch(r"[kK](\d+)", spec)
    if m:
        return complete_graph(int(m.group(1)))
    m = re.fullmatch(r"[cC](\d+)", spec)
    if m:
        return cycle_graph(int(m.group(1)))
    if Path(spec).exists():
        return parse_edge_list(_read(spec))
    raise InputError(f"unknown graph {spec!r} (use kN, cN, or an edge-list file)")


def parse_edge_list(text: str) -> Graph:
    """One edge per line as two node indices; node count = highest index + 1."""
    edges = []
    hi = -1
    for no, toks in _lines(text):
        if len(toks) != 2:
            raise InputError(f"line {no}: an edge is two node indices")
        u, v = _int(toks[0], no), _int(toks[1], no)
        edges.append((u, v))
        hi = max(hi, u, v)
    if hi < 0:
        raise InputError("edge list is empty")
    return graph(hi + 1, edges)


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = None
    lits = []
    clauses = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s[0] in "c%":
            continue
        if s[0] == "p":
            parts = s.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InputError(f"line {no}: malformed DIMACS header")
            num_vars = _int(parts[2], no)
            continue
        for tok in s.split():
            v = _int(tok, no)
            if v == 0:
                if lits:
                    clauses.append(tuple(lits))
                    lits = []
            else:
                lits.append(v)
    if lits:
        clauses.append(tuple(lits))
    if num_vars is None:
        num_vars = max((abs(l) for cl in clauses for l in cl), default=1)
    return CnfFormula(num_vars, tuple(clauses))


# ---------------------------------------------------------------------------
# Commands


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
        print(f"wrote {out}")


def _cap_kw(args) -> dict:
    cap = getattr(args, "iteration_cap", None)
    return {} if cap is None else {"iteration_cap": cap}


def _fmt_blocks(blocks) -> str:
    return " | ".join(" ".join(str(a) for a in b) for b in blocks)


def _fmt_value(v) -> str:
    return "INF" if v == INF else str(v)


def cmd_solvable(args) -> int:
    language = parse_language(_read(args.language))
    start = time.perf_counter()
    verdict = is_solvable(language, **_cap_kw(args))
    elapsed = time.perf_counter() - start
    print(f"verdict: {'solvable' if verdict.solvable else 'not-solvable'}")
    print("partition: " + _fmt_blocks(verdict.partition.blocks))
    print(f"core: {' '.join(str(a) for a in verdict.core) or 'none'}"
          f" (size {len(verdict.core)})")
    cd = verdict.trace.get("core", {})
    print(
        "core search: outcome={} iterations={} cuts={} dead_candidates={}".format(
            cd.get("outcome"), cd.get("iterations"), cd.get("cuts"),
            cd.get("dead_candidates"),
        )
    )
    sv = verdict.trace.get("solvability")
    if sv is not None:
        print(
            "solvability: mode={} outcome={} iterations={} cuts={}".format(
                sv["mode"], sv["outcome"], sv["iterations"], sv["cuts"]
            )
        )
    if verdict.omega1 is not None:
        print(f"omega1 support: {len(verdict.omega1.support)}")
    if verdict.omega2 is not None:
        print(f"omega2 support: {len(verdict.omega2.support)}")
    print(f"time: {elapsed:.2f}s")
    if args.cert:
        if verdict.solvable:
            Path(args.cert).write_text(print_certificate(certificate_of(verdict)))
            print(f"certificate: {args.cert}")
        else:
            print("certificate: none (not solvable)")
    return 0


def cmd_verify(args) -> int:
    language = parse_language(_read(args.language))
    cert = parse_certificate(_read(args.certificate))
    problems = verify_certificate(language, cert)
    if problems:
        for p in problems:
            print(f"reject: {p}")
        return 1
    print("accept")
    return 0


def _load_pair(args) -> tuple[Language, Instance]:
    language = parse_language(_read(args.language))
    return language, parse_instance(_read(args.instance), language)


def cmd_blp(args) -> int:
    _, instance = _load_pair(args)
    sol = blp_solve(instance, want_mu=False)
    print(f"blp value: {_fmt_value(sol.value)}")
    return 0


def cmd_solve(args) -> int:
    _, instance = _load_pair(args)
    best, arg = solve_exhaustive(instance)
    print(f"minimum: {_fmt_value(best)}")
    print("argmin: " + (" ".join(str(a) for a in arg) if arg is not None else "none"))
    return 0


def cmd_probe(args) -> int:
    _, instance = _load_pair(args)
    if args.labels is None:
        labels = range(instance.domain_size)
    else:
        labels = [
            _int(t.strip(), 0) for t in args.labels.split(",") if t.strip()
        ]
    res = lp_probe(instance, labels)
    print(f"probe: {res.kind}")
    if res.labeling is not None:
        print("labeling: " + " ".join(str(a) for a in res.labeling))
    if res.value is not None:
        print(f"value: {_fmt_value(res.value)}")
    return 0


def cmd_core(args) -> int:
    language = parse_language(_read(args.language))
    if args.brute:
        size, image, _ = brute_core(language)
        print(f"coresize: {size}")
        print("core: " + " ".join(str(a) for a in image))
        return 0
    part = maximal_partition(language, **_cap_kw(args))
    res = conditional_core(language, part, **_cap_kw(args))
    print("partition: " + _fmt_blocks(part.blocks))
    print(f"coresize: {len(res.core)}")
    print("core: " + (" ".join(str(a) for a in res.core) or "none"))
    print(f"outcome: {res.diagnostics.get('outcome')}")
    return 0


def cmd_partition(args) -> int:
    language = parse_language(_read(args.language))
    part = maximal_partition(language, **_cap_kw(args))
    print("partition: " + _fmt_blocks(part.blocks))
    print(f"blocks: {part.num_blocks}")
    return 0


def cmd_gen_coloring(args) -> int:
    g = _graph_arg(args.graph)
    inst = coloring_instance(g)
    if args.lift is None:
        neq = cost_function(
            2,
            COLORS,
            {(a, b): 0 for a in range(COLORS) for b in range(COLORS) if a != b},
        )
        language = Language(COLORS, (neq,), ("neq",))
        companion = inst
    else:
        language = lift_language(inst, 1 if args.lift == "1" else math.inf)
        companion = lifted_instance(inst, language)
    _emit(print_language(language), args.out)
    if args.instance_out:
        _emit(print_instance(companion, language), args.instance_out)
    return 0


def cmd_gen_cnf(args) -> int:
    formula = parse_dimacs(_read(args.dimacs))
    inst = kcnf_to_csp(formula, args.p, args.q)
    language = Language(
        3,
        tuple(t.function for t in inst.terms),
        tuple(f"c{i}" for i in range(len(inst.terms))),
    )
    _emit(print_language(language), args.out)
    if args.instance_out:
        _emit(print_instance(inst, language), args.instance_out)
    return 0


def cmd_gen_random(args) -> int:
    rng = random.Random(args.seed)
    language = random_finite_language(rng)
    _emit(print_language(language), args.out)
    if args.instance_out:
        inst = random_instance(
            rng, language, max_vars=args.max_vars, max_terms=args.max_terms
        )
        _emit(print_instance(inst, language), args.instance_out)
    return 0


# ---------------------------------------------------------------------------
# Wiring


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="vclang",
        description="Decide solvability of valued constraint languages, "
        "with verifiable certificates.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solvable", help="decide solvability of a language file")
    p.add_argument("language")
    p.add_argument("--cert", help="write the certificate here when solvable")
    p.add_argument("--iteration-cap", type=int, default=None,
                   help="cutting-plane iteration budget")
    p.set_defaults(func=cmd_solvable)

    p = sub.add_parser("verify", help="check a certificate file against a language")
    p.add_argument("language")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("blp", help="value of the basic LP relaxation")
    p.add_argument("language")
    p.add_argument("instance")
    p.set_defaults(func=cmd_blp)

    p = sub.add_parser("solve", help="exhaustive minimum of an instance")
    p.add_argument("language")
    p.add_argument("instance")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("probe", help="extract a minimizer by pinning labels")
    p.add_argument("language")
    p.add_argument("instance")
    p.add_argument("--labels", help="comma-separated label set (default: all)")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("core", help="conditional core (or --brute for the oracle)")
    p.add_argument("language")
    p.add_argument("--brute", action="store_true")
    p.add_argument("--iteration-cap", type=int, default=None)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("partition", help="maximal conditional partition")
    p.add_argument("language")
    p.add_argument("--iteration-cap", type=int, default=None)
    p.set_defaults(func=cmd_partition)

    g = sub.add_parser("gen", help="emit language/instance files")
    gsub = g.add_subparsers(dest="family", required=True)

    c = gsub.add_parser("coloring", help="graph 3-coloring, optionally lifted")
    c.add_argument("--graph", required=True,
                   help="kN, cN, or a path to an edge-list file")
    c.add_argument("--lift", choices=("1", "inf"),
                   help="emit the lifted language instead of the plain one")
    c.add_argument("--out", default="-", help="language file (default: stdout)")
    c.add_argument("--instance-out", help="also write the companion instance")
    c.set_defaults(func=cmd_gen_coloring)

    n = gsub.add_parser("cnf", help="encode a DIMACS CNF over domain 3")
    n.add_argument("--dimacs", required=True)
    n.add_argument("-p", type=int, default=3, help="boolean variables per group")
    n.add_argument("-q", type=int, default=2, help="ternary variables per group")
    n.add_argument("--out", default="-", help="language file (default: stdout)")
    n.add_argument("--instance-out", help="also write the instance file")
    n.set_defaults(func=cmd_gen_cnf)

    r = gsub.add_parser("random", help="seeded random finite-valued language")
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--out", default="-", help="language file (default: stdout)")
    r.add_argument("--instance-out", help="also write a random instance over it")
    r.add_argument("--max-vars", type=int, default=4)
    r.add_argument("--max-terms", type=int, default=4)
    r.set_defaults(func=cmd_gen_random)

    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BudgetError as e:
        print(f"budget refused ({e.budget}): {e}", file=sys.stderr)
        return 3
    except InvariantError as e:
        print(f"invariant breach: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
