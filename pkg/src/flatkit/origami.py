"""Square-tiled surfaces given by a pair of permutations.

An origami of degree d is d unit squares with the right edge of square s
glued to the left edge of square h(s) and the top edge of s glued to the
bottom edge of v(s); the pair must act transitively so the surface is
connected.  Squares are 0-based internally; the text format is 1-based.

Provides conversion to a polygon surface, stratum computation (cross-checked
against the polygon route on every call), canonical forms and isomorphism,
the shear and quarter-turn actions with orbit enumeration, horizontal
cylinder decompositions, and exhaustive enumeration by stratum.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator, Optional, Sequence, Union

from . import flatcore
from .flatcore import EdgeRef, PlanarVec, PolygonChain, StratumSignature, TranslationSurface

Perm = tuple[int, ...]
CanonicalForm = tuple[int, ...]


def invert_perm(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, image in enumerate(p):
        out[image] = i
    return tuple(out)


def _check_perm(p: Sequence[int], d: int, name: str) -> Perm:
    p = tuple(int(x) for x in p)
    if len(p) != d or sorted(p) != list(range(d)):
        raise ValueError(f"{name} is not a permutation of 0..{d - 1}: {p}")
    return p


@dataclass(frozen=True)
class Origami:
    """Degree plus the right-neighbor and top-neighbor permutations (0-based)."""

    d: int
    h: Perm
    v: Perm

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"degree must be positive, got {self.d}")
        object.__setattr__(self, "h", _check_perm(self.h, self.d, "h"))
        object.__setattr__(self, "v", _check_perm(self.v, self.d, "v"))


def is_connected(o: Origami) -> bool:
    seen = [False] * o.d
    seen[0] = True
    stack = [0]
    hinv, vinv = invert_perm(o.h), invert_perm(o.v)
    while stack:
        s = stack.pop()
        for t in (o.h[s], hinv[s], o.v[s], vinv[s]):
            if not seen[t]:
                seen[t] = True
                stack.append(t)
    return all(seen)


def _perm_from_spec(spec: Union[str, Sequence[int]], d: int, name: str) -> Perm:
    """A permutation from cycle notation (1-based) or a 1-based image list."""
    if isinstance(spec, str):
        return parse_cycles(spec, d)
    images = [int(x) for x in spec]
    if sorted(images) != list(range(1, d + 1)):
        raise ValueError(f"{name} is not a 1-based permutation of 1..{d}: {spec}")
    return tuple(x - 1 for x in images)


def make(d: int, h: Union[str, Sequence[int]], v: Union[str, Sequence[int]]) -> Origami:
    """Public constructor: builds and checks connectivity.

    h and v may be cycle strings like "(1,2,3)(4,5)" or 1-based image lists.
    """
    o = Origami(d, _perm_from_spec(h, d, "h"), _perm_from_spec(v, d, "v"))
    if not is_connected(o):
        raise ValueError("not connected: h and v do not act transitively")
    return o


# --- cycle notation ---------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, d: int) -> Perm:
    """1-based cycle notation "(1,2,3)(4,5)"; fixed points may be omitted."""
    stripped = text.strip()
    if stripped in ("", "id"):
        return tuple(range(d))
    if stripped.replace("(", "").replace(")", "").strip() == "":
        return tuple(range(d))
    consumed = _CYCLE_RE.sub("", stripped).strip()
    if consumed:
        raise ValueError(f"unparsed text {consumed!r} in cycle notation {text!r}")
    images = list(range(d))
    seen: set[int] = set()
    for group in _CYCLE_RE.findall(stripped):
        entries = [e for e in re.split(r"[,\s]+", group.strip()) if e]
        if not entries:
            continue
        try:
            cycle = [int(e) for e in entries]
        except ValueError as exc:
            raise ValueError(f"bad cycle entry in {text!r}: {exc}") from exc
        for x in cycle:
            if not 1 <= x <= d:
                raise ValueError(f"cycle entry {x} out of range 1..{d}")
            if x in seen:
                raise ValueError(f"label {x} appears twice in cycle notation {text!r}")
            seen.add(x)
        for i, x in enumerate(cycle):
            images[x - 1] = cycle[(i + 1) % len(cycle)] - 1
    return tuple(images)


def cycles_of(p: Sequence[int]) -> list[list[int]]:
    """Cycles of a 0-based permutation, each starting at its least element."""
    seen = [False] * len(p)
    out: list[list[int]] = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        cur = p[start]
        while cur != start:
            cyc.append(cur)
            seen[cur] = True
            cur = p[cur]
        out.append(cyc)
    return out


def format_cycles(p: Sequence[int]) -> str:
    """1-based cycle notation; fixed points omitted; identity is "()"."""
    parts = [
        "(" + ",".join(str(x + 1) for x in cyc) + ")"
        for cyc in cycles_of(p)
        if len(cyc) > 1
    ]
    return "".join(parts) if parts else "()"


# --- text file format -------------------------------------------------------


def parse_origami_text(text: str) -> Origami:
    """Parse the three-line format: "d: 5" then "h: (1,2,3,4)" then "v: (1,5)".

    Blank lines are skipped and everything after a # is a comment; h and v
    may appear in either order but d must come first so omitted fixed points
    are defined.
    """
    d: Optional[int] = None
    perms: dict[str, Perm] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^(d|h|v)\s*:\s*(.*)$", line)
        if m is None:
            raise ValueError(f"line {lineno}: expected 'd:', 'h:' or 'v:', got {raw!r}")
        key, rest = m.group(1), m.group(2).strip()
        if key == "d":
            if d is not None:
                raise ValueError(f"line {lineno}: duplicate 'd:' line")
            try:
                d = int(rest)
            except ValueError as exc:
                raise ValueError(f"line {lineno}: bad degree {rest!r}") from exc
            if d < 1:
                raise ValueError(f"line {lineno}: degree must be positive, got {d}")
        else:
            if d is None:
                raise ValueError(f"line {lineno}: 'd:' must come before '{key}:'")
            if key in perms:
                raise ValueError(f"line {lineno}: duplicate '{key}:' line")
            try:
                perms[key] = parse_cycles(rest, d)
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from exc
    if d is None or "h" not in perms or "v" not in perms:
        raise ValueError("origami text needs 'd:', 'h:' and 'v:' lines")
    o = Origami(d, perms["h"], perms["v"])
    if not is_connected(o):
        raise ValueError("not connected: h and v do not act transitively")
    return o


def origami_to_text(o: Origami) -> str:
    return f"d: {o.d}\nh: {format_cycles(o.h)}\nv: {format_cycles(o.v)}\n"


def load_origami(path: str) -> Origami:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_origami_text(fh.read())


def dump_origami(o: Origami, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(origami_to_text(o))


# --- geometry ---------------------------------------------------------------


def to_polygons(o: Origami) -> TranslationSurface:
    """The polygon surface: one unit square per label, drawn in a row.

    Square s sits at horizontal offset 5s/4 (the 1/4 gap keeps renderings
    readable); edge order is bottom, right, top, left, counterclockwise.
    """
    polys = []
    for s in range(o.d):
        x0 = Fraction(5 * s, 4)
        polys.append(
            PolygonChain(
                (
                    PlanarVec(x0, Fraction(0)),
                    PlanarVec(x0 + 1, Fraction(0)),
                    PlanarVec(x0 + 1, Fraction(1)),
                    PlanarVec(x0, Fraction(1)),
                )
            )
        )
    pairing: dict[EdgeRef, EdgeRef] = {}
    for s in range(o.d):
        right, left_of_h = EdgeRef(s, 1), EdgeRef(o.h[s], 3)
        top, bottom_of_v = EdgeRef(s, 2), EdgeRef(o.v[s], 0)
        pairing[right] = left_of_h
        pairing[left_of_h] = right
        pairing[top] = bottom_of_v
        pairing[bottom_of_v] = top
    return TranslationSurface(tuple(polys), pairing)


def commutator(o: Origami) -> Perm:
    """The corner permutation h v h^-1 v^-1 (applied right to left).

    Its cycles are the vertices of the tiling; a cycle of length k is a cone
    point of angle 2*pi*k.
    """
    hinv, vinv = invert_perm(o.h), invert_perm(o.v)
    return tuple(o.h[o.v[hinv[vinv[s]]]] for s in range(o.d))


def _orders_from_commutator(o: Origami) -> tuple[int, ...]:
    return tuple(
        sorted((len(c) - 1 for c in cycles_of(commutator(o)) if len(c) > 1), reverse=True)
    )


@lru_cache(maxsize=65536)
def singularity_orders(o: Origami) -> StratumSignature:
    """Stratum from the corner permutation, verified against the polygon route.

    The permutation-level count is fast; the polygon-based computation is the
    normative reference, so the two are compared on every distinct input and
    a mismatch (a convention bug, not a data error) aborts.
    """
    orders = _orders_from_commutator(o)
    g = sum(orders) // 2 + 1
    signature = StratumSignature(g, orders)
    oracle = flatcore.stratum(to_polygons(o))
    if oracle != signature:
        raise RuntimeError(
            f"corner-permutation stratum {signature} disagrees with polygon stratum {oracle}"
        )
    return signature


def genus(o: Origami) -> int:
    return singularity_orders(o).genus


# --- canonical form and isomorphism ----------------------------------------


def canonical_form(o: Origami) -> CanonicalForm:
    """Least relabeled encoding (d, h', v') over breadth-first relabelings.

    Squares are renamed in breadth-first discovery order with neighbor order
    right, left, up, down, once from each possible start square; the
    lexicographically least flat tuple is canonical.  Two origamis have equal
    canonical forms exactly when one is a relabeling of the other.
    """
    d, h, v = o.d, o.h, o.v
    hinv, vinv = invert_perm(h), invert_perm(v)
    best: Optional[tuple[int, ...]] = None
    for start in range(d):
        label = [-1] * d
        order = [start]
        label[start] = 0
        qi = 0
        while qi < len(order):
            s = order[qi]
            qi += 1
            for t in (h[s], hinv[s], v[s], vinv[s]):
                if label[t] < 0:
                    label[t] = len(order)
                    order.append(t)
        if qi != d:
            raise ValueError("not connected: h and v do not act transitively")
        hp = [0] * d
        vp = [0] * d
        for s in range(d):
            hp[label[s]] = label[h[s]]
            vp[label[s]] = label[v[s]]
        code = (d, *hp, *vp)
        if best is None or code < best:
            best = code
    assert best is not None
    return best


def decode_canonical(code: CanonicalForm) -> Origami:
    d = code[0]
    if len(code) != 1 + 2 * d:
        raise ValueError(f"canonical form has wrong length for degree {d}")
    return Origami(d, tuple(code[1 : 1 + d]), tuple(code[1 + d :]))


def is_isomorphic(o1: Origami, o2: Origami) -> bool:
    if o1.d != o2.d:
        return False
    return canonical_form(o1) == canonical_form(o2)


def relabel(o: Origami, sigma: Sequence[int]) -> Origami:
    """Conjugate both permutations by sigma (sigma maps old label -> new)."""
    sigma = _check_perm(sigma, o.d, "sigma")
    inv = invert_perm(sigma)
    h = tuple(sigma[o.h[inv[s]]] for s in range(o.d))
    v = tuple(sigma[o.v[inv[s]]] for s in range(o.d))
    return Origami(o.d, h, v)


# --- integer shear and rotation actions -------------------------------------


def act_T(o: Origami) -> Origami:
    """Horizontal unit shear: rows stay, the top-neighbor map becomes h^-1 v.

    After shearing, climbing out of square s lands one square further left in
    the row above, which composes the old climb with one step of h^-1.
    """
    hinv = invert_perm(o.h)
    return Origami(o.d, o.h, tuple(hinv[o.v[s]] for s in range(o.d)))


def act_T_inverse(o: Origami) -> Origami:
    return Origami(o.d, o.h, tuple(o.h[o.v[s]] for s in range(o.d)))


def act_S(o: Origami) -> Origami:
    """Quarter turn: rows become columns; (h, v) -> (v, h^-1).  S^4 = id."""
    return Origami(o.d, o.v, invert_perm(o.h))


@dataclass(frozen=True)
class OrbitData:
    """Closure of one origami under the shear and quarter-turn moves.

    elements are canonical forms in sorted order; cusp_widths are the sizes
    of the shear orbits on the elements; edges record one generator move
    (source index, move label, target index) per explored transition.
    """

    elements: tuple[CanonicalForm, ...]
    cusp_widths: tuple[int, ...]
    edges: tuple[tuple[int, str, int], ...]


_MOVES = (("S", act_S), ("T", act_T), ("T^-1", act_T_inverse))


def orbit(o: Origami, max_elements: int = 10000) -> OrbitData:
    if max_elements < 1:
        raise ValueError("max_elements must be at least 1")
    start = canonical_form(o)
    seen = {start}
    frontier = [start]
    raw_edges: list[tuple[CanonicalForm, str, CanonicalForm]] = []
    while frontier:
        code = frontier.pop()
        rep = decode_canonical(code)
        for label, move in _MOVES:
            image = canonical_form(move(rep))
            raw_edges.append((code, label, image))
            if image not in seen:
                if len(seen) == max_elements:
                    raise RuntimeError(
                        f"budget exceeded: orbit has more than {max_elements} elements"
                    )
                seen.add(image)
                frontier.append(image)

    elements = tuple(sorted(seen))
    index = {code: i for i, code in enumerate(elements)}
    edges = tuple(sorted((index[a], label, index[b]) for a, label, b in raw_edges))

    widths = []
    visited: set[CanonicalForm] = set()
    for code in elements:
        if code in visited:
            continue
        width = 0
        cur = code
        while cur not in visited:
            visited.add(cur)
            width += 1
            cur = canonical_form(act_T(decode_canonical(cur)))
        widths.append(width)
    assert sum(widths) == len(elements)
    return OrbitData(elements, tuple(sorted(widths, reverse=True)), edges)


# --- horizontal cylinders ---------------------------------------------------


@dataclass(frozen=True)
class Cylinder:
    width: int
    height: int


@dataclass(frozen=True)
class CylinderDecomposition:
    cylinders: tuple[Cylinder, ...]


def cylinders(o: Origami) -> CylinderDecomposition:
    """Horizontal cylinders: rows of squares merged across clean interfaces.

    Each cycle of h is a row.  The interface above a row is free of cone
    points exactly when no top corner of the row lies in a singular vertex
    (read off the polygon model); then the row above continues the same
    cylinder.
    """
    sing = flatcore.singularities(to_polygons(o))
    singular_corners = {
        corner for cp in sing if cp.angle_turns > 1 for corner in cp.corners
    }
    rows = cycles_of(o.h)
    row_of = {}
    for r, row in enumerate(rows):
        for s in row:
            row_of[s] = r

    parent = list(range(len(rows)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for r, row in enumerate(rows):
        clean = all(
            (s, 2) not in singular_corners and (s, 3) not in singular_corners
            for s in row
        )
        if not clean:
            continue
        above = {row_of[o.v[s]] for s in row}
        if len(above) != 1:
            raise RuntimeError(f"clean interface above row {row} maps to several rows")
        r_above = above.pop()
        if len(rows[r_above]) != len(row):
            raise RuntimeError(f"clean interface joins rows of different widths")
        ra, rb = find(r), find(r_above)
        if ra != rb:
            parent[ra] = rb

    groups: dict[int, list[int]] = {}
    for r in range(len(rows)):
        groups.setdefault(find(r), []).append(r)
    cyls = []
    for members in groups.values():
        widths = {len(rows[r]) for r in members}
        assert len(widths) == 1
        cyls.append(Cylinder(widths.pop(), len(members)))
    cyls.sort(key=lambda c: (c.width, c.height), reverse=True)
    total = sum(c.width * c.height for c in cyls)
    if total != o.d:
        raise RuntimeError(f"cylinder areas sum to {total}, expected {o.d}")
    return CylinderDecomposition(tuple(cyls))


# --- enumeration ------------------------------------------------------------


def random_origami(d: int, rng: random.Random) -> Origami:
    """Uniform connected pair by rejection sampling."""
    labels = list(range(d))
    while True:
        h = labels[:]
        v = labels[:]
        rng.shuffle(h)
        rng.shuffle(v)
        o = Origami(d, tuple(h), tuple(v))
        if is_connected(o):
            return o


def _int_partitions(n: int) -> Iterator[tuple[int, ...]]:
    def gen(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(min(cap, remaining), 0, -1):
            for rest in gen(remaining - first, first):
                yield (first,) + rest

    yield from gen(n, n)


def _cycle_type_rep(parts: Sequence[int]) -> Perm:
    """The permutation with consecutive cycles of the given lengths."""
    images = []
    base = 0
    for length in parts:
        images.extend(list(range(base + 1, base + length)) + [base])
        base += length
    return tuple(images)


def _target_type(d: int, orders: Sequence[int]) -> tuple[int, ...]:
    lengths = sorted((m + 1 for m in orders), reverse=True)
    if any(m < 1 for m in orders):
        raise ValueError(f"zero orders must be positive: {orders}")
    if sum(lengths) > d:
        raise ValueError(f"orders {orders} need more than {d} squares")
    return tuple(lengths + [1] * (d - sum(lengths)))


def _cycle_lengths(p: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles_of(p)), reverse=True))


@lru_cache(maxsize=None)
def _stratum_classes_python(d: int, orders: tuple[int, ...]) -> tuple[CanonicalForm, ...]:
    """All degree-d isomorphism classes with the given zero orders (d small).

    h runs over one representative per cycle type (any pair can be relabeled
    so that h is its type representative), v over all permutations; matches
    are deduplicated by canonical form.
    """
    target = _target_type(d, orders)
    found: set[CanonicalForm] = set()
    squares = list(range(d))
    for parts in _int_partitions(d):
        h = _cycle_type_rep(parts)
        hinv = invert_perm(h)
        for v in permutations(squares):
            vinv = invert_perm(v)
            comm = tuple(h[v[hinv[vinv[s]]]] for s in squares)
            if _cycle_lengths(comm) != target:
                continue
            o = Origami(d, h, v)
            if not is_connected(o):
                continue
            found.add(canonical_form(o))
    return tuple(sorted(found))


def _all_perms_array(d: int):
    """All d! permutations of 0..d-1 as an int8 array, built by insertion."""
    import numpy as np

    out = np.zeros((1, 1), dtype=np.int8)
    for k in range(2, d + 1):
        prev = out
        m = prev.shape[0]
        new = np.empty((m * k, k), dtype=np.int8)
        for pos in range(k):
            block = new[pos * m : (pos + 1) * m]
            block[:, :pos] = prev[:, :pos]
            block[:, pos] = k - 1
            block[:, pos + 1 :] = prev[:, pos:]
        out = new
    return out


def _labeled_stratum_pairs_numpy(
    d: int, orders: tuple[int, ...], chunk: int = 2000000
) -> Iterator[tuple[Perm, Perm]]:
    """Raw (h, v) pairs with the given corner cycle type, h fixed per type.

    Vectorized scan over all v for each cycle-type representative h.  The
    corner permutation c = h v h^-1 v^-1 is never formed on the full block:
    its conjugate t = v^-1 h v h^-1 has the same cycle type, and fixed points
    of t are solutions of h(v(h^-1(s))) = v(s), which needs no inversion of
    v.  Rows passing that count are compressed before t itself and its
    powers are taken; fixed-point counts of the powers pin down the
    multiplicity of every cycle length up to the largest target length, and
    the total degree excludes longer cycles.  Connectivity is NOT checked
    here and isomorphic duplicates are NOT removed.
    """
    import numpy as np

    target = _target_type(d, orders)
    counts = {length: target.count(length) for length in set(target)}
    max_len = max(target)
    expected_fix = {
        k: sum(length * n for length, n in counts.items() if k % length == 0)
        for k in range(1, max_len + 1)
    }

    all_perms = _all_perms_array(d)
    identity = np.arange(d, dtype=np.int8)
    for parts in _int_partitions(d):
        h = np.array(_cycle_type_rep(parts), dtype=np.int8)
        hinv = np.empty(d, dtype=np.int8)
        hinv[h] = identity
        hinv_cols = hinv.astype(np.intp)
        h_tuple = tuple(int(x) for x in h)
        for lo in range(0, all_perms.shape[0], chunk):
            v_block = all_perms[lo : lo + chunk]
            g = h[v_block[:, hinv_cols]]
            keep = (g == v_block).sum(axis=1) == expected_fix[1]
            if not keep.any():
                continue
            v_sub = v_block[keep]
            g_sub = g[keep]
            vinv = np.empty_like(v_sub)
            np.put_along_axis(
                vinv,
                v_sub.astype(np.intp),
                np.broadcast_to(identity, v_sub.shape),
                axis=1,
            )
            conj = np.take_along_axis(vinv, g_sub.astype(np.intp), axis=1)
            mask = np.ones(conj.shape[0], dtype=bool)
            power = conj
            for k in range(2, max_len + 1):
                power = np.take_along_axis(power, conj.astype(np.intp), axis=1)
                mask &= (power == identity).sum(axis=1) == expected_fix[k]
                if not mask.any():
                    break
            if not mask.any():
                continue
            for row in v_sub[mask]:
                yield h_tuple, tuple(int(x) for x in row)


_NUMPY_THRESHOLD = 9


def origamis_in_stratum(
    d: int, orders: Sequence[int], up_to_iso: bool = True
) -> Iterator[Origami]:
    """All connected degree-d origamis whose zero orders equal the given ones.

    With up_to_iso (default) one representative per isomorphism class is
    produced; otherwise every (cycle-type representative h, v) pair that
    matches is yielded, which is cheaper for large d and sufficient for
    universally quantified checks.  Degrees too small to carry the orders
    give an empty enumeration.
    """
    orders = tuple(sorted((int(m) for m in orders), reverse=True))
    if sum(m + 1 for m in orders) > d:
        return
    if d < _NUMPY_THRESHOLD:
        for code in _stratum_classes_python(d, orders):
            yield decode_canonical(code)
        return
    if not up_to_iso:
        for h, v in _labeled_stratum_pairs_numpy(d, orders):
            o = Origami(d, h, v)
            if is_connected(o):
                yield o
        return
    seen: set[CanonicalForm] = set()
    for h, v in _labeled_stratum_pairs_numpy(d, orders):
        o = Origami(d, h, v)
        if not is_connected(o):
            continue
        code = canonical_form(o)
        if code not in seen:
            seen.add(code)
            yield decode_canonical(code)


def stratum_pairs_raw(d: int, orders: Sequence[int]) -> Iterator[tuple[Perm, Perm]]:
    """Raw (h, v) permutation pairs whose corner cycle type matches orders.

    For d below the vectorized threshold this decodes one pair per
    isomorphism class (all connected).  For larger d it yields every labeled
    pair with the right cycle type WITHOUT the connectivity check, which is
    the cheap superset appropriate for universally quantified scans: any
    property verified on all raw pairs holds on all origamis in the stratum.
    """
    orders = tuple(sorted((int(m) for m in orders), reverse=True))
    if sum(m + 1 for m in orders) > d:
        return
    if d < _NUMPY_THRESHOLD:
        for code in _stratum_classes_python(d, orders):
            o = decode_canonical(code)
            yield o.h, o.v
        return
    yield from _labeled_stratum_pairs_numpy(d, orders)
