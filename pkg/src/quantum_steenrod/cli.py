"""qsteenrod: command-line access to the Sq / QS engines.

Exit status: 0 success, 1 a verification reported failures, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from .adem import admissible_pairs, fact1_solve, qq_classical, quantum_adem_defect, reconstruct_composition, verify_adem
from .elements import HTElement, format_monomial
from .gf2poly import Monomial, Poly
from .qsteenrod import CorrectionError, NotFactorizable, QuantumSquares
from .rings import RingPresentation
from .specfile import SpecError, load_spec, parse_element, parse_poly, render_element
from .steenrod import NotSqClosed, SteenrodSquares, UnsupportedRing, stiefel_whitney, wu_class

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# --- report tables ---

@dataclass
class ReportTable:
    """Rows of (input class, value) with the ring used to render them."""

    ring: RingPresentation
    rows: list[tuple[Monomial, HTElement]]

    def records(self) -> list[dict]:
        names = self.ring.names
        out = []
        for m, value in self.rows:
            for c, t, h in sorted(value, key=lambda x: (-x[2], self.ring.index.get(x[0], 0), x[1])):
                out.append({"input": format_monomial(m, names), "class": format_monomial(c, names),
                            "h": h, "t": t, "coeff": 1})
        return out

    def render(self, fmt: str = "text") -> str:
        if fmt == "text":
            return "".join(f"{format_monomial(m, self.ring.names)}: {render_element(v, self.ring)}\n" for m, v in self.rows)
        if fmt == "json":
            return json.dumps(self.records(), indent=1) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.DictWriter(buf, fieldnames=["input", "class", "h", "t", "coeff"], lineterminator="\n")
            w.writeheader()
            w.writerows(self.records())
            return buf.getvalue()
        raise ValueError(f"unknown format {fmt!r}")

    @classmethod
    def parse_text(cls, ring: RingPresentation, text: str) -> "ReportTable":
        rows = []
        for line in text.splitlines():
            if not line.strip():
                continue
            key, _, val = line.partition(":")
            m = parse_poly(key, list(ring.names))
            if len(m) != 1:
                raise SpecError(f"row label {key!r} is not a single class")
            rows.append((next(iter(m)), parse_element(val, list(ring.names))))
        return cls(ring, rows)


# --- helpers ---

def _ring_and_sq(name: str):
    spec = load_spec(name)
    ring = spec.ring()
    return spec, ring, SteenrodSquares(ring)


def _engine(name: str) -> QuantumSquares:
    spec = load_spec(name)
    if not spec.has_quantum:
        raise InputError(f"{spec.name} is ring-only; this command needs quantum data")
    return QuantumSquares(spec.quantum())


def _parse_class(ring: RingPresentation, text: str) -> Poly:
    p = ring.reduce(parse_poly(text, list(ring.names)))
    try:
        ring.poly_degree(p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return p


def _parse_quantum_class(engine: QuantumSquares, text: str) -> HTElement:
    ring = engine.ring
    a = parse_element(text, list(ring.names))
    if any(h for _, _, h in a):
        raise InputError("QS takes an element of QH*(M); drop h")
    a = ring.element(a)
    try:
        engine.qstruct.degree(a)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return a


# --- commands ---

def cmd_sq(args, out) -> int:
    _, ring, sq = _ring_and_sq(args.manifold)
    if args.cls:
        out.write(render_element(sq.sq(_parse_class(ring, args.cls)), ring) + "\n")
    else:
        out.write(ReportTable(ring, [(m, sq.table[m]) for m in ring.basis_classes]).render())
    return EXIT_OK


def cmd_qs(args, out) -> int:
    engine = _engine(args.manifold)
    ring = engine.ring
    if args.cls:
        out.write(render_element(engine.qs(_parse_quantum_class(engine, args.cls)), ring) + "\n")
    else:
        out.write(ReportTable(ring, [(m, engine.table[m]) for m in ring.basis_classes]).render())
    return EXIT_OK


def cmd_wu(args, out) -> int:
    _, ring, sq = _ring_and_sq(args.manifold)
    out.write(render_element(wu_class(sq), ring) + "\n")
    return EXIT_OK


def cmd_sw(args, out) -> int:
    _, ring, sq = _ring_and_sq(args.manifold)
    out.write(render_element(stiefel_whitney(sq), ring) + "\n")
    return EXIT_OK


def cmd_qsw(args, out) -> int:
    engine = _engine(args.manifold)
    out.write(render_element(engine.quantum_stiefel_whitney(), engine.ring) + "\n")
    return EXIT_OK


def cmd_qq(args, out) -> int:
    _, ring, sq = _ring_and_sq(args.manifold)
    q = qq_classical(_parse_class(ring, args.cls), sq)
    if not q:
        out.write("0\n")
        return EXIT_OK
    parts = []
    for m, i, j in sorted(q.terms, key=lambda x: (ring.index.get(x[0], 0), -x[1], x[2])):
        factors = [format_monomial(m, ring.names)] if any(m) else []
        if i:
            factors.append("e" if i == 1 else f"e^{i}")
        if j:
            factors.append("s2" if j == 1 else f"s2^{j}")
        parts.append(" ".join(factors) or "1")
    out.write(" + ".join(parts) + "\n")
    return EXIT_OK


def cmd_verify_cartan(args, out) -> int:
    engine = _engine(args.manifold)
    ring = engine.ring
    gens = [m for m in ring.basis.get(2, [])]
    failures = 0
    ledger = []
    for a in ring.basis_classes:
        for x in gens:
            rep = engine.verify_quantum_cartan(a, x)
            pair = f"({format_monomial(a, ring.names)}, {format_monomial(x, ring.names)})"
            if not rep.ok:
                failures += 1
                out.write(f"FAIL at {pair}: mismatch {render_element(rep.mismatch, ring)}\n")
            if rep.correction:
                ledger.append(f"  {render_element(rep.correction, ring)} at {pair}\n")
    out.write(("PASS" if not failures else f"FAIL ({failures} pairs)") + f": quantum Cartan on {ring.name}\n")
    if ledger:
        out.write("corrections:\n" + "".join(ledger))
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_verify_adem(args, out) -> int:
    _, ring, sq = _ring_and_sq(args.manifold)
    failures = 0
    pairs = [(p, q) for p, q in admissible_pairs(3 * args.pmax) if p <= args.pmax]
    for p, q in pairs:
        rep = verify_adem(sq, p, q)
        for f in rep.failures:
            out.write(f"FAIL {f}\n")
        failures += len(rep.failures)
    for alpha in ring.basis_classes:
        a = Poly.monomial(alpha)
        d = ring.degree(alpha)
        rep = fact1_solve(qq_classical(a, sq))
        if not rep.ok:
            failures += 1
            out.write(f"FAIL qq({format_monomial(alpha, ring.names)}) is not in the image of pi*\n")
            continue
        for p in range(d + 1):
            for q in range(d + p + 1):
                if reconstruct_composition(rep, ring.nvars, d, p, q) != sq.compose(a, q, p):
                    failures += 1
                    out.write(f"FAIL reconstruction of Sq^{q}Sq^{p}({format_monomial(alpha, ring.names)})\n")
    status = "PASS" if not failures else f"FAIL ({failures})"
    out.write(f"{status}: Adem relations for p <= {args.pmax} ({len(pairs)} pairs) and qq invariance on {ring.name}\n")
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_defect(args, out) -> int:
    engine = _engine(args.manifold)
    ring = engine.ring
    alpha = _parse_class(ring, args.cls)
    try:
        rep = quantum_adem_defect(engine, HTElement.from_poly(alpha), args.p, args.q)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.write(f"defect of Sq^{args.q}Sq^{args.p} on {ring.format(alpha)} in {ring.name}: {render_element(rep.total, ring)}\n")
    for (b, d), piece in sorted(rep.contributions.items()):
        out.write(f"  (b, d) = ({b}, {d}): {render_element(piece, ring)}\n")
    return EXIT_OK


def cmd_table(args, out) -> int:
    spec = load_spec(args.manifold)
    ring = spec.ring()
    if spec.has_quantum and args.op == "qs":
        engine = QuantumSquares(spec.quantum())
        table = ReportTable(ring, [(m, engine.table[m]) for m in ring.basis_classes])
    else:
        sq = SteenrodSquares(ring)
        table = ReportTable(ring, [(m, sq.table[m]) for m in ring.basis_classes])
    out.write(table.render(args.format))
    return EXIT_OK


# --- entry point ---

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qsteenrod", description="Classical and quantum Steenrod squares mod 2.")
    sub = ap.add_subparsers(dest="command", required=True)
    man_help = "built-in name (cpn:N, p1xp1, p1cubed, m05bar) or spec file path"

    for name, fn, hlp in (("sq", cmd_sq, "total Steenrod square"), ("qs", cmd_qs, "quantum Steenrod square")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("manifold", help=man_help)
        p.add_argument("cls", nargs="?", help="class, e.g. x^2 (default: the whole table)")
        p.set_defaults(func=fn)
    for name, fn, hlp in (("wu", cmd_wu, "Wu class"), ("sw", cmd_sw, "Stiefel-Whitney class"),
                          ("qsw", cmd_qsw, "quantum Stiefel-Whitney class")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("manifold", help=man_help)
        p.set_defaults(func=fn)

    p = sub.add_parser("qq", help="qq(alpha) with coefficients in H*(BD8)_red")
    p.add_argument("manifold", help=man_help)
    p.add_argument("cls")
    p.set_defaults(func=cmd_qq)

    p = sub.add_parser("verify", help="verification suites")
    vsub = p.add_subparsers(dest="suite", required=True)
    v = vsub.add_parser("cartan", help="quantum Cartan relation on all (a, x), |x| = 2")
    v.add_argument("manifold", help=man_help)
    v.set_defaults(func=cmd_verify_cartan)
    v = vsub.add_parser("adem", help="classical Adem relations and qq invariance")
    v.add_argument("manifold", help=man_help)
    v.add_argument("--pmax", type=int, default=6)
    v.set_defaults(func=cmd_verify_adem)

    p = sub.add_parser("defect", help="defect of the naive Adem relation for QS")
    p.add_argument("manifold", help=man_help)
    p.add_argument("cls")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_defect)

    p = sub.add_parser("table", help="emit the QS (or Sq) table")
    p.add_argument("manifold", help=man_help)
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.add_argument("--op", choices=["qs", "sq"], default="qs")
    p.set_defaults(func=cmd_table)
    return ap


def run_command(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (InputError, SpecError, NotFactorizable, CorrectionError, UnsupportedRing, NotSqClosed) as exc:
        print(f"qsteenrod: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
