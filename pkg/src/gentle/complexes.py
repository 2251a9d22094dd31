"""Complexes of projectives attached to generalized strings and bands.

Node j of a walk sits in degree mu(j) and contributes the projective at the
node's vertex; each letter yields one differential entry, left multiplication
by its underlying path.  Bands repeat every node d times and twist the
closing letter by an upper triangular Jordan block with eigenvalue lambda.
Scalars are exact rationals throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import PresentationError, path_basis, compose
from .walks import GBA, GST, rotate_walk


@dataclass(frozen=True)
class Summand:
    """One indecomposable projective slot: vertex plus (node, copy) tag."""

    vertex: str
    node: int
    copy: int = 0


@dataclass(frozen=True)
class ProjComplex:
    """Bounded complex of projectives with sparse path-scalar differentials.

    ``summands`` maps degree -> tuple of Summand; ``diffs`` maps degree i ->
    {(row, col): ((path, scalar), ...)} where row indexes a degree-i summand
    and col a degree-(i+1) summand; the entry means "scalar times left
    multiplication by path".
    """

    summands: dict
    diffs: dict
    origin: str = ""

    def degrees(self):
        return sorted(self.summands)

    def summand_count(self):
        return sum(len(v) for v in self.summands.values())

    def is_zero(self):
        return not self.summands


def _entries_for_walk(walk):
    """(source node, target node, path) per letter; inverse letters map
    forward along the walk, direct letters map backward."""
    out = []
    for j, letter in enumerate(walk.letters, start=1):
        if letter.inverse:
            out.append((j - 1, j, letter.path))
        else:
            out.append((j, j - 1, letter.path))
    return out


def string_complex(pres, walk):
    """The minimal complex of Definition-style string type for a GST walk."""
    if walk.kind not in (GST, GBA):
        raise PresentationError(f"string_complex needs a generalized string, got {walk.kind}")
    n = walk.width
    mu = walk.mu
    summands = {}
    position = {}
    for j in range(n + 1):
        deg = mu[j]
        slot = summands.setdefault(deg, [])
        position[j] = (deg, len(slot))
        slot.append(Summand(walk.node_vertex(j), j))
    diffs = {}
    for src, dst, path in _entries_for_walk(walk):
        deg, row = position[src]
        _, col = position[dst]
        assert mu[dst] == deg + 1
        diffs.setdefault(deg, {})[(row, col)] = ((path, Fraction(1)),)
    cx = ProjComplex({d: tuple(s) for d, s in summands.items()},
                     {d: dict(m) for d, m in diffs.items()},
                     origin=f"string:{walk.literal()}")
    _assert_d_squared_zero(pres, cx)
    return cx


def stalk_complex(pres, vertex):
    """The one-term complex with P_vertex in degree 0."""
    if vertex not in pres.vertices:
        raise PresentationError(f"unknown vertex {vertex!r}")
    return ProjComplex({0: (Summand(vertex, 0),)}, {}, origin=f"stalk:{vertex}")


def jordan_block(lam, d):
    """Upper triangular d x d Jordan block with eigenvalue lam."""
    lam = Fraction(lam)
    block = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        block[i][i] = lam
        if i + 1 < d:
            block[i][i + 1] = Fraction(1)
    return block


def mu_minimal_rotation(pres, walk):
    """Rotate a band so its degree profile attains the minimum at node 0."""
    if walk.kind != GBA:
        raise PresentationError("mu_minimal_rotation needs a band")
    best = min(walk.mu[:-1])
    k = walk.mu.index(best)
    return rotate_walk(pres, walk, k)


def band_complex(pres, walk, lam, d):
    """The band complex for (walk, lambda, d), built on the rotation whose
    degree minimum sits at node 0; then the first letter is inverse, the
    closing letter direct, and degree 0 carries no cohomology."""
    if walk.kind != GBA:
        raise PresentationError(f"band_complex needs a generalized band, got {walk.kind}")
    lam = Fraction(lam)
    if lam == 0:
        raise PresentationError("band parameter lambda must be nonzero")
    if d < 1:
        raise PresentationError("band multiplicity d must be >= 1")
    walk = mu_minimal_rotation(pres, walk)
    n = walk.width
    mu = walk.mu
    summands = {}
    position = {}
    for j in range(n):
        deg = mu[j]
        slot = summands.setdefault(deg, [])
        position[j] = (deg, len(slot))
        for copy in range(d):
            slot.append(Summand(walk.node_vertex(j), j, copy))
    identity = [[Fraction(1 if i == j else 0) for j in range(d)] for i in range(d)]
    closing = jordan_block(lam, d)
    diffs = {}

    def add_block(src, dst, path, block):
        deg, row0 = position[src]
        _, col0 = position[dst]
        assert mu[dst] == deg + 1 or (dst == 0 and mu[src] + 1 == mu[n])
        slot = diffs.setdefault(deg, {})
        for r in range(d):
            for c in range(d):
                if block[r][c] != 0:
                    key = (row0 + r, col0 + c)
                    terms = list(slot.get(key, ()))
                    terms.append((path, block[r][c]))
                    slot[key] = tuple(terms)

    for j, letter in enumerate(walk.letters[:-1], start=1):
        if letter.inverse:
            add_block(j - 1, j, letter.path, identity)
        else:
            add_block(j, j - 1, letter.path, identity)
    closing_letter = walk.letters[-1]
    if closing_letter.inverse:
        add_block(n - 1, 0, closing_letter.path, closing)
    else:
        add_block(0, n - 1, closing_letter.path, closing)
    cx = ProjComplex({deg: tuple(s) for deg, s in summands.items()},
                     {deg: dict(m) for deg, m in diffs.items()},
                     origin=f"band:{walk.literal()}:lam={lam}:d={d}")
    _assert_d_squared_zero(pres, cx)
    return cx


def shift(cx, k):
    """The shifted complex C[k]: degrees drop by k, differentials pick up
    the sign (-1)^k."""
    if k == 0:
        return cx
    sign = Fraction(-1) ** (k % 2)
    summands = {deg - k: s for deg, s in cx.summands.items()}
    diffs = {}
    for deg, entries in cx.diffs.items():
        diffs[deg - k] = {
            key: tuple((p, sc * sign) for p, sc in terms)
            for key, terms in entries.items()
        }
    return ProjComplex(summands, diffs, origin=cx.origin + f"[{k}]")


def brutal_truncate(cx, j):
    """Drop all degrees below j, including the differential into degree j."""
    summands = {deg: s for deg, s in cx.summands.items() if deg >= j}
    diffs = {deg: m for deg, m in cx.diffs.items() if deg >= j}
    return ProjComplex(summands, diffs, origin=cx.origin + f"|>={j}")


def check_minimal(cx):
    """Every differential term lands in the radical (path length >= 1)."""
    for entries in cx.diffs.values():
        for terms in entries.values():
            for path, _ in terms:
                if path.is_trivial():
                    return False
    return True


def differential_matrix(pres, cx, degree):
    """The degree -> degree+1 differential expanded on path bases.

    Rows are indexed by basis paths of the degree+1 summands, columns by
    basis paths of the degree summands, both in path_basis order.
    """
    basis = {v: [] for v in pres.vertices}
    for p in path_basis(pres):
        basis[p.source].append(p)
    pos = {v: {p.arrows: k for k, p in enumerate(ps)} for v, ps in basis.items()}
    col_offsets, ncols = _slot_offsets(basis, cx.summands.get(degree, ()))
    row_offsets, nrows = _slot_offsets(basis, cx.summands.get(degree + 1, ()))
    matrix = [[Fraction(0)] * ncols for _ in range(nrows)]
    for (src_idx, dst_idx), terms in cx.diffs.get(degree, {}).items():
        src = cx.summands[degree][src_idx]
        dst = cx.summands[degree + 1][dst_idx]
        for path, scalar in terms:
            for k, u in enumerate(basis[src.vertex]):
                image = compose(pres, path, u)
                if image is None:
                    continue
                r = row_offsets[dst_idx] + pos[dst.vertex][image.arrows]
                c = col_offsets[src_idx] + k
                matrix[r][c] += scalar
    return matrix


def _slot_offsets(basis, summands):
    offsets = []
    total = 0
    for s in summands:
        offsets.append(total)
        total += len(basis[s.vertex])
    return offsets, total


def total_dimension(pres, cx, degree):
    from .core import dim_projective
    return sum(dim_projective(pres, s.vertex) for s in cx.summands.get(degree, ()))


def _assert_d_squared_zero(pres, cx):
    """Symbolic d.d = 0 check; encodes the relation conditions of the walk."""
    for deg in cx.diffs:
        if deg + 1 not in cx.diffs:
            continue
        first = cx.diffs[deg]
        second = cx.diffs[deg + 1]
        acc = {}
        for (i, j), terms1 in first.items():
            for (j2, k), terms2 in second.items():
                if j != j2:
                    continue
                for p1, s1 in terms1:
                    for p2, s2 in terms2:
                        prod = compose(pres, p2, p1)
                        if prod is None:
                            continue
                        key = (i, k, prod.arrows)
                        acc[key] = acc.get(key, Fraction(0)) + s1 * s2
        bad = {k: v for k, v in acc.items() if v != 0}
        if bad:
            raise PresentationError(f"d^2 != 0 in {cx.origin} at degree {deg}: {bad}")


def complex_to_json(pres, cx):
    """JSON form: grouped summands per degree, sparse term lists per entry."""
    degrees = {}
    for deg in cx.degrees():
        grouped = []
        for s in cx.summands[deg]:
            if grouped and grouped[-1][0] == s.vertex and s.copy > 0:
                grouped[-1][1] += 1
            else:
                grouped.append([s.vertex, 1])
        degrees[str(deg)] = grouped
    diffs = {}
    for deg in sorted(cx.diffs):
        items = []
        for (row, col) in sorted(cx.diffs[deg]):
            terms = cx.diffs[deg][(row, col)]
            items.append({
                "row": row,
                "col": col,
                "terms": [[p.label(), str(sc)] for p, sc in terms],
            })
        if items:
            diffs[str(deg)] = items
    return {"degrees": degrees, "diffs": diffs}
