"""Command-line front end: analysis, orbits, spin, matrix action, rendering.

Input files are either surface JSON (see flatcore) or origami text (see
origami); the format is sniffed from the content.  All arithmetic stays
rational; floating point appears only when emitting SVG coordinates.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import flatcore, gl2, hyperell, origami as origami_mod, spin, strata


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class Report:
    """Analysis record for one input; keys serialize in fixed order."""

    source: str
    kind: str
    degree: Optional[int] = None
    genus: Optional[int] = None
    stratum_orders: Optional[tuple[int, ...]] = None
    cone_angle_turns: Optional[tuple[int, ...]] = None
    period_rank: Optional[int] = None
    integral: Optional[bool] = None
    spin_parity: Optional[int] = None
    component: Optional[str] = None
    messages: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out: dict = {"source": self.source, "kind": self.kind}
        for key in (
            "degree",
            "genus",
            "stratum_orders",
            "cone_angle_turns",
            "period_rank",
            "integral",
            "spin_parity",
            "component",
        ):
            value = getattr(self, key)
            if value is not None:
                out[key] = list(value) if isinstance(value, tuple) else value
        out["messages"] = list(self.messages)
        return out

    def to_text(self) -> str:
        lines = [f"input: {self.source} ({self.kind})"]
        if self.degree is not None:
            lines.append(f"degree: {self.degree}")
        if self.genus is not None:
            lines.append(f"genus: {self.genus}")
        if self.stratum_orders is not None:
            inner = ",".join(str(m) for m in self.stratum_orders)
            lines.append(f"stratum: H({inner})" if inner else "stratum: H() [torus]")
        if self.cone_angle_turns is not None:
            angles = ", ".join(f"{2 * t}pi" for t in self.cone_angle_turns)
            lines.append(f"cone angles: {angles}")
        if self.period_rank is not None:
            lines.append(f"period rank: {self.period_rank}")
        if self.integral is not None:
            lines.append(f"integral periods: {'yes' if self.integral else 'no'}")
        if self.spin_parity is not None:
            lines.append(f"spin parity: {self.spin_parity}")
        if self.component is not None:
            lines.append(f"component: {self.component}")
        for msg in self.messages:
            lines.append(f"note: {msg}")
        return "\n".join(lines)


class CliError(Exception):
    pass


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _load_input(path: str) -> tuple[str, Union[flatcore.TranslationSurface, origami_mod.Origami]]:
    """Sniff the format: JSON object -> surface, otherwise origami text."""
    text = _read_text(path)
    if text.lstrip().startswith("{"):
        try:
            return "surface", flatcore.surface_from_json(text)
        except json.JSONDecodeError as exc:
            raise CliError(
                f"{path}: JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
        except ValueError as exc:
            raise CliError(f"{path}: {exc}") from exc
    try:
        return "origami", origami_mod.parse_origami_text(text)
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _surface_of(loaded: tuple[str, object]) -> flatcore.TranslationSurface:
    kind, value = loaded
    if kind == "surface":
        return value
    return origami_mod.to_polygons(value)


def _emit(args: argparse.Namespace, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_analyze(args: argparse.Namespace) -> int:
    kind, value = _load_input(args.path)
    report = Report(source=args.path, kind=kind)
    if kind == "surface":
        surf = value
        check = flatcore.validate(surf)
        if not check.ok:
            for violation in check.violations:
                print(f"invalid: {violation}", file=sys.stderr)
            return 1
    else:
        report.degree = value.d
        surf = origami_mod.to_polygons(value)
    points = flatcore.singularities(surf)
    signature = flatcore.stratum(surf)
    report.genus = signature.genus
    report.stratum_orders = signature.orders
    report.cone_angle_turns = tuple(cp.angle_turns for cp in points)
    report.period_rank = flatcore.periods(surf).rank
    report.integral = flatcore.is_integral(surf)
    if kind == "origami":
        o = value
        if all(m % 2 == 0 for m in signature.orders):
            report.spin_parity = spin.spin_parity(o)
            if signature.genus >= 2:
                report.component = str(spin.classify_component(o))
            else:
                report.component = str(strata.components(signature.orders)[0])
        else:
            report.messages.append("spin parity undefined (odd zero order)")
            if signature.genus >= 2:
                report.component = str(spin.classify_component(o))
    _emit(args, report.to_dict(), report.to_text())
    return 0


def cmd_orbit(args: argparse.Namespace) -> int:
    kind, value = _load_input(args.path)
    if kind != "origami":
        raise CliError("orbit requires an origami input")
    try:
        data = origami_mod.orbit(value, max_elements=args.max)
    except RuntimeError as exc:
        raise CliError(str(exc)) from exc
    payload = {
        "source": args.path,
        "orbit_size": len(data.elements),
        "cusp_widths": list(data.cusp_widths),
        "elements": [list(code) for code in data.elements],
        "edges": [list(edge) for edge in data.edges],
    }
    lines = [
        f"orbit size: {len(data.elements)}",
        f"cusp widths: {list(data.cusp_widths)}",
    ]
    for i, code in enumerate(data.elements):
        rep = origami_mod.decode_canonical(code)
        lines.append(
            f"  [{i}] h: {origami_mod.format_cycles(rep.h)}  v: {origami_mod.format_cycles(rep.v)}"
        )
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_spin(args: argparse.Namespace) -> int:
    kind, value = _load_input(args.path)
    if kind != "origami":
        raise CliError("spin requires an origami input")
    try:
        parity = spin.spin_parity(value)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    payload = {"source": args.path, "spin_parity": parity}
    _emit(args, payload, f"spin parity: {parity}")
    return 0


def _parse_matrix(tokens: Sequence[str]) -> gl2.Mat2:
    entries = [piece for token in tokens for piece in token.replace(",", " ").split()]
    if len(entries) != 4:
        raise CliError(f"matrix needs 4 entries a b c d, got {len(entries)}")
    try:
        a, b, c, d = (Fraction(e) for e in entries)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"bad matrix entry: {exc}") from exc
    return gl2.Mat2(a, b, c, d)


def cmd_act(args: argparse.Namespace) -> int:
    loaded = _load_input(args.path)
    surf = _surface_of(loaded)
    matrix = _parse_matrix(args.matrix)
    try:
        image = gl2.apply(surf, matrix)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    blob = json.dumps(flatcore.surface_to_json(image), indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(blob + "\n")
        print(f"wrote {args.output}")
    else:
        print(blob)
    return 0


def cmd_strata(args: argparse.Namespace) -> int:
    g = args.genus
    if g < 1:
        raise CliError("genus must be at least 1")
    rows = []
    for orders in strata.partitions(g):
        dim = strata.dimension(orders) if g >= 2 else 2
        comps = [str(c) for c in strata.components(orders)]
        rows.append({"orders": list(orders), "dimension": dim, "components": comps})
    payload: dict = {"genus": g, "strata": rows}
    lines = [f"genus {g}: {len(rows)} strata"]
    if g >= 2:
        payload["hodge_dimension"] = strata.hodge_dimension(g)
        payload["hyperelliptic_locus_dimension"] = strata.hyperelliptic_locus_dimension(g)
        lines.append(
            f"ambient (curve, form) dimension: {strata.hodge_dimension(g)}; "
            f"hyperelliptic locus: {strata.hyperelliptic_locus_dimension(g)}"
        )
    for row in rows:
        inner = ",".join(str(m) for m in row["orders"])
        lines.append(
            f"  H({inner}): dim {row['dimension']}, components {{{', '.join(row['components'])}}}"
        )
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_divisor(args: argparse.Namespace) -> int:
    try:
        points = [Fraction(p) for p in args.branch.split(",") if p.strip() != ""]
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"bad branch point: {exc}") from exc
    try:
        branches = hyperell.branch_set(points)
        form = hyperell.parse_form(args.form)
        div = hyperell.divisor_of_form(branches, form)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if args.genus is not None and branches.genus != args.genus:
        raise CliError(
            f"{len(points)} branch points give genus {branches.genus}, not {args.genus}"
        )
    entries = [[str(place), order] for place, order in div.entries]
    payload = {
        "genus": branches.genus,
        "form": str(form),
        "entries": entries,
        "total_order": div.total_order,
        "holomorphic": div.is_effective,
    }
    lines = [f"genus {branches.genus}, form {form} * dz/x"]
    for place, order in div.entries:
        lines.append(f"  {place}: order {order}")
    lines.append(f"total order: {div.total_order}")
    lines.append(f"holomorphic: {'yes' if div.is_effective else 'no'}")
    _emit(args, payload, "\n".join(lines))
    return 0


_PALETTE = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#46f0f0",
    "#f032e6", "#bcf60c", "#008080", "#9a6324", "#800000", "#808000",
    "#000075", "#fabebe", "#aaffc3", "#ffd8b1",
]


def render_svg(surf: flatcore.TranslationSurface, width: int = 800) -> str:
    """SVG drawing: paired edges share a color, cone points get dots.

    Rational coordinates are converted to floats here and only here.
    """
    xs = [p.x for poly in surf.polygons for p in poly.vertices]
    ys = [p.y for poly in surf.polygons for p in poly.vertices]
    minx, maxx = min(xs), max(xs)
    miny, maxy = min(ys), max(ys)
    span_x = max(maxx - minx, Fraction(1))
    span_y = max(maxy - miny, Fraction(1))
    margin = 30.0
    scale = (width - 2 * margin) / float(span_x)
    height = float(span_y) * scale + 2 * margin

    def to_px(p: flatcore.PlanarVec) -> tuple[float, float]:
        return (
            margin + float(p.x - minx) * scale,
            margin + float(maxy - p.y) * scale,
        )

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height:.1f}" viewBox="0 0 {width} {height:.1f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for poly in surf.polygons:
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in (to_px(p) for p in poly.vertices))
        parts.append(f'<polygon points="{pts}" fill="#f2f2f2" stroke="none"/>')

    pair_color: dict[flatcore.EdgeRef, str] = {}
    color_index = 0
    for e in sorted(surf.pairing.keys()):
        partner = surf.pairing[e]
        if e < partner:
            color = _PALETTE[color_index % len(_PALETTE)]
            color_index += 1
            pair_color[e] = color
            pair_color[partner] = color
    for e, color in pair_color.items():
        poly = surf.polygons[e.polygon]
        x1, y1 = to_px(poly.vertex(e.edge))
        x2, y2 = to_px(poly.vertex(e.edge + 1))
        parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{color}" stroke-width="3"/>'
        )
    for cp in flatcore.singularities(surf):
        if cp.angle_turns <= 1:
            continue
        for p_idx, v_idx in cp.corners:
            x, y = to_px(surf.polygons[p_idx].vertex(v_idx))
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="5" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def cmd_render(args: argparse.Namespace) -> int:
    loaded = _load_input(args.path)
    surf = _surface_of(loaded)
    check = flatcore.validate(surf)
    if not check.ok:
        for violation in check.violations:
            print(f"invalid: {violation}", file=sys.stderr)
        return 1
    svg = render_svg(surf)
    out = args.output
    if out is None:
        stem = args.path.rsplit(".", 1)[0]
        out = stem + ".svg"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(svg + "\n")
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatkit",
        description="Exact-arithmetic analysis of translation surfaces and origamis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="genus, stratum, angles, periods, spin")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("orbit", help="closure under the shear and rotation moves")
    p.add_argument("path")
    p.add_argument("--max", type=int, default=10000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("spin", help="spin parity of an origami")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_spin)

    p = sub.add_parser("act", help="apply a 2x2 rational matrix")
    p.add_argument("path")
    p.add_argument(
        "--matrix",
        nargs="+",
        required=True,
        metavar="ENTRY",
        help='four rationals "a b c d"; use one comma-joined token for negatives, e.g. 3/5,-4/5,4/5,3/5',
    )
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("strata", help="list strata of a genus with components")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("divisor", help="divisor of f(z) dz/x on a hyperelliptic curve")
    p.add_argument("--genus", type=int, default=None)
    p.add_argument("--branch", required=True, help="comma-separated branch values")
    p.add_argument("--form", required=True, help='factored form, e.g. "3*(z-1)^2"')
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_divisor)

    p = sub.add_parser("render", help="draw the polygons as SVG")
    p.add_argument("path")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
