"""
Bimodules over a finite model: the algebra itself, Ext^n(DL, L), and tensor powers over L.

A bimodule is a vertex-pair graded vector space.  Basis vector k lies in
e_i M e_j for pairs[k] = (i, j); arrows act by sparse column maps.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from algebra.linalg import QuotientSpace, Vector, from_columns, nullspace, solve
from algebra.pathalg import AlgebraInputError
from config.logger import logger
from config.settings import DEFAULT_RESOLUTION_CAP
from repthy.complexes import Entries, compose_entries, hom_matrix, map_matrix
from repthy.homological import Resolution, projective_resolution
from repthy.model import LEFT, Element, FiniteAlgebraModel, injective_module

Sparse = Dict[int, Fraction]
Action = Dict[str, Dict[int, Sparse]]  # arrow -> basis index -> image


def _add_into(acc: Sparse, x: Sparse, coef: Fraction = Fraction(1)) -> None:
    for k, v in x.items():
        acc[k] = acc.get(k, 0) + coef * v


def _clean(x: Sparse) -> Sparse:
    return {k: v for k, v in x.items() if v != 0}


@dataclass(eq=False)
class Bimodule:
    model: FiniteAlgebraModel
    pairs: Tuple[Tuple[str, str], ...]
    left: Action = field(default_factory=dict)
    right: Action = field(default_factory=dict)
    name: str = ""

    @property
    def dimension(self) -> int:
        return len(self.pairs)

    def pair_dims(self) -> Dict[Tuple[str, str], int]:
        out: Dict[Tuple[str, str], int] = {}
        for p in self.pairs:
            out[p] = out.get(p, 0) + 1
        return dict(sorted(out.items()))

    def act_left(self, arrow: str, x: Sparse) -> Sparse:
        out: Sparse = {}
        images = self.left.get(arrow, {})
        for k, c in x.items():
            _add_into(out, images.get(k, {}), c)
        return _clean(out)

    def act_right(self, x: Sparse, arrow: str) -> Sparse:
        out: Sparse = {}
        images = self.right.get(arrow, {})
        for k, c in x.items():
            _add_into(out, images.get(k, {}), c)
        return _clean(out)

    def actions_commute(self) -> bool:
        names = [a.name for a in self.model.quiver.arrows]
        for k in range(self.dimension):
            unit = {k: Fraction(1)}
            for a in names:
                for b in names:
                    if self.act_right(self.act_left(a, unit), b) != self.act_left(a, self.act_right(unit, b)):
                        return False
        return True

    def as_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "pairs": {f"{i},{j}": n for (i, j), n in self.pair_dims().items()},
        }


def algebra_bimodule(model: FiniteAlgebraModel) -> Bimodule:
    pairs = tuple((p.target, p.source) for p in model.basis)
    left: Action = {}
    right: Action = {}
    for a in model.quiver.arrows:
        arrow = model.arrow_element(a.name)
        left[a.name] = {w: model.mul(arrow, {w: Fraction(1)}) for w in range(model.dimension)}
        right[a.name] = {w: model.mul({w: Fraction(1)}, arrow) for w in range(model.dimension)}
    return Bimodule(model, pairs, left, right, model.name or "L")


# -----------------------------
# Ext^n(DL, L)
# -----------------------------

@dataclass(eq=False)
class _CohomologyBlock:
    """H^n of Hom(P_*, L) restricted to left vertex i and right vertex j."""
    keys: List[Tuple[int, int]]  # (generator of P_n, word) spanning the cochains
    position: Dict[Tuple[int, int], int]
    cycles: List[Vector]
    quotient: QuotientSpace

    @property
    def size(self) -> int:
        return self.quotient.size

    def lift(self, coords: Vector) -> Vector:
        z = self.quotient.lift(coords)
        out = [Fraction(0)] * len(self.keys)
        for c, cyc in zip(z, self.cycles):
            if c:
                for r, v in enumerate(cyc):
                    out[r] += c * v
        return out

    def project(self, vec: Vector) -> Vector:
        if not self.cycles:
            return []
        coords = solve(from_columns(self.cycles, len(self.keys)), vec)
        if coords is None:
            raise AlgebraInputError("vector is not a cocycle", {"size": len(vec)})
        return self.quotient.project(coords)


def _cochain_keys(model: FiniteAlgebraModel, res: Resolution, k: int, right_vertex: str) -> List[Tuple[int, int]]:
    gens = res.term(k).gens
    return [
        (g, w) for g, v in enumerate(gens)
        for w in range(model.dimension)
        if model.basis[w].target == v and model.basis[w].source == right_vertex
    ]


def _pullback(model: FiniteAlgebraModel, entries: Entries, src_keys: List[Tuple[int, int]], dst_keys: List[Tuple[int, int]]) -> List[Vector]:
    """Columns of f -> f o m for m given by entries (target generator, source generator)."""
    position = {key: r for r, key in enumerate(dst_keys)}
    cols = []
    for g, w in src_keys:
        col = [Fraction(0)] * len(dst_keys)
        for (h, g2), mu in entries.items():
            if h != g:
                continue
            for k, c in model.mul(mu, {w: Fraction(1)}).items():
                col[position[(g2, k)]] += c
        cols.append(col)
    return cols


def _cohomology_block(model: FiniteAlgebraModel, res: Resolution, n: int, j: str) -> _CohomologyBlock:
    keys = _cochain_keys(model, res, n, j)
    position = {key: r for r, key in enumerate(keys)}
    after = _cochain_keys(model, res, n + 1, j)
    delta = from_columns(_pullback(model, res.differential(n + 1), keys, after), len(after))
    cycles = nullspace(delta) if keys else []
    boundaries: List[Vector] = []
    if n > 0 and cycles:
        before = _cochain_keys(model, res, n - 1, j)
        cycle_matrix = from_columns(cycles, len(keys))
        for col in _pullback(model, res.differential(n), before, keys):
            coords = solve(cycle_matrix, col)
            if coords is None:
                raise AlgebraInputError("coboundary outside the cocycles", {"degree": n})
            boundaries.append(coords)
    return _CohomologyBlock(keys, position, cycles, QuotientSpace(len(cycles), boundaries))


def _right_multiplication(model: FiniteAlgebraModel, arrow: Element, t: str, s: str, u: str) -> List[Vector]:
    """Columns of I_t -> I_s at vertex u induced by right multiplication with an arrow t <- s on DL."""
    rows = [k for k in range(model.dimension) if model.basis[k].target == s and model.basis[k].source == u]
    cols = [k for k in range(model.dimension) if model.basis[k].target == t and model.basis[k].source == u]
    out = []
    for w in cols:
        out.append([model.mul(arrow, {x: Fraction(1)}).get(w, Fraction(0)) for x in rows])
    return out


def _lift_chain_map(model: FiniteAlgebraModel, res_t: Resolution, res_s: Resolution, arrow_name: str, n: int) -> Entries:
    """Entries of g_n for a chain map P(I_t) -> P(I_s) over right multiplication by the arrow."""
    a = model.quiver.arrow(arrow_name)
    arrow = model.arrow_element(arrow_name)
    p0_t, p0_s = res_t.term(0), res_s.term(0)
    current: Entries = {}
    for g, v in enumerate(p0_t.gens):
        image = res_t.augmentation.get(g, [])
        cols = _right_multiplication(model, arrow, a.target, a.source, v)
        moved = [sum((c * col[r] for c, col in zip(image, cols)), Fraction(0)) for r in range(res_s.module.dims[v])]
        cover = hom_matrix(p0_s, res_s.module, res_s.augmentation, v)
        y = solve(cover, moved)
        if y is None:
            raise AlgebraInputError("cannot lift through the projective cover", {"arrow": arrow_name, "vertex": v})
        for h, x in p0_s.split(v, y).items():
            current[(h, g)] = x
    for k in range(1, n + 1):
        src, dst = res_t.term(k), res_s.term(k)
        through = compose_entries(model, LEFT, res_t.differential(k), current)
        below = res_s.term(k - 1)
        nxt: Entries = {}
        for g, v in enumerate(src.gens):
            target = below.vector(v, {h: x for (h, g2), x in through.items() if g2 == g})
            y = solve(map_matrix(dst, below, res_s.differential(k), v), target)
            if y is None:
                raise AlgebraInputError("cannot lift through the resolution", {"arrow": arrow_name, "degree": k})
            for h, x in dst.split(v, y).items():
                nxt[(h, g)] = x
        current = nxt
    return current


def ext_bimodule(model: FiniteAlgebraModel, n: int, cap: int = DEFAULT_RESOLUTION_CAP) -> Bimodule:
    """Ext^n(DL, L): right action from L, left action from the right action of L on DL."""
    if n < 1:
        raise AlgebraInputError("Ext bimodule needs n >= 1", {"n": n})
    vertices = model.vertices
    resolutions = {i: projective_resolution(injective_module(model, i), max(cap, n + 1)) for i in vertices}
    blocks: Dict[Tuple[str, str], _CohomologyBlock] = {}
    for i in vertices:
        for j in vertices:
            blocks[(i, j)] = _cohomology_block(model, resolutions[i], n, j)
    offsets: Dict[Tuple[str, str], int] = {}
    pairs: List[Tuple[str, str]] = []
    for key, blk in blocks.items():
        offsets[key] = len(pairs)
        pairs.extend([key] * blk.size)

    def place(key: Tuple[str, str], coords: Vector) -> Sparse:
        return _clean({offsets[key] + r: c for r, c in enumerate(coords)})

    right: Action = {}
    left: Action = {}
    for a in model.quiver.arrows:
        arrow = model.arrow_element(a.name)
        right[a.name] = {}
        for (i, j), blk in blocks.items():
            if j != a.target or not blk.size:
                continue
            dst = blocks[(i, a.source)]
            for r in range(blk.size):
                vec = blk.lift([Fraction(int(q == r)) for q in range(blk.size)])
                moved = [Fraction(0)] * len(dst.keys)
                for (g, w), c in zip(blk.keys, vec):
                    if c:
                        for k, v in model.mul({w: Fraction(1)}, arrow).items():
                            moved[dst.position[(g, k)]] += c * v
                right[a.name][offsets[(i, j)] + r] = place((i, a.source), dst.project(moved))
        left[a.name] = {}
        if not any(blocks[(a.source, j)].size for j in vertices):
            continue
        lift = _lift_chain_map(model, resolutions[a.target], resolutions[a.source], a.name, n)
        for j in vertices:
            blk, dst = blocks[(a.source, j)], blocks[(a.target, j)]
            if not blk.size:
                continue
            cols = _pullback(model, lift, blk.keys, dst.keys)
            for r in range(blk.size):
                vec = blk.lift([Fraction(int(q == r)) for q in range(blk.size)])
                moved = [sum((c * col[row] for c, col in zip(vec, cols) if c), Fraction(0)) for row in range(len(dst.keys))]
                left[a.name][offsets[(a.source, j)] + r] = place((a.target, j), dst.project(moved))
    bimodule = Bimodule(model, tuple(pairs), left, right, f"Ext^{n}(DL,L)")
    logger.info("Ext^%d(DL, L) over %s: dimension %d", n, model.name or "algebra", bimodule.dimension)
    return bimodule


# -----------------------------
# Tensor products over L
# -----------------------------

def tensor_over(m: Bimodule, n: Bimodule) -> Bimodule:
    """M (x)_L N as the cokernel of m.a (x) x - m (x) a.x on the vertex-matched tensor product."""
    model = m.model
    vertices = model.quiver.vertices
    ambient: Dict[Tuple[str, str], List[Tuple[int, int]]] = {}
    for x, (i, v) in enumerate(m.pairs):
        for y, (v2, j) in enumerate(n.pairs):
            if v == v2:
                ambient.setdefault((i, j), []).append((x, y))
    positions = {key: {p: r for r, p in enumerate(ps)} for key, ps in ambient.items()}
    relations: Dict[Tuple[str, str], List[Vector]] = {key: [] for key in ambient}
    for a in model.quiver.arrows:
        for x, (i, v) in enumerate(m.pairs):
            if v != a.target:
                continue
            moved_m = m.act_right({x: Fraction(1)}, a.name)
            for y, (v2, j) in enumerate(n.pairs):
                if v2 != a.source:
                    continue
                key = (i, j)
                rel = [Fraction(0)] * len(ambient.get(key, []))
                for x2, c in moved_m.items():
                    rel[positions[key][(x2, y)]] += c
                for y2, c in n.act_left(a.name, {y: Fraction(1)}).items():
                    rel[positions[key][(x, y2)]] -= c
                if any(rel):
                    relations[key].append(rel)
    quotients = {key: QuotientSpace(len(ps), relations[key]) for key, ps in ambient.items()}
    offsets: Dict[Tuple[str, str], int] = {}
    pairs: List[Tuple[str, str]] = []
    for key in sorted(ambient, key=lambda k: (vertices.index(k[0]), vertices.index(k[1]))):
        offsets[key] = len(pairs)
        pairs.extend([key] * quotients[key].size)

    def project(key: Tuple[str, str], vec: Dict[Tuple[int, int], Fraction]) -> Sparse:
        if key not in quotients or not quotients[key].size:
            return {}
        dense = [Fraction(0)] * len(ambient[key])
        for p, c in vec.items():
            dense[positions[key][p]] += c
        return _clean({offsets[key] + r: c for r, c in enumerate(quotients[key].project(dense))})

    left: Action = {}
    right: Action = {}
    for a in model.quiver.arrows:
        left[a.name], right[a.name] = {}, {}
        for key, q in quotients.items():
            for r in range(q.size):
                lifted = q.lift([Fraction(int(t == r)) for t in range(q.size)])
                terms = [(ambient[key][p], c) for p, c in enumerate(lifted) if c]
                if key[0] == a.source:
                    out: Dict[Tuple[int, int], Fraction] = {}
                    for (x, y), c in terms:
                        for x2, c2 in m.act_left(a.name, {x: Fraction(1)}).items():
                            out[(x2, y)] = out.get((x2, y), 0) + c * c2
                    left[a.name][offsets[key] + r] = project((a.target, key[1]), out)
                if key[1] == a.target:
                    out = {}
                    for (x, y), c in terms:
                        for y2, c2 in n.act_right({y: Fraction(1)}, a.name).items():
                            out[(x, y2)] = out.get((x, y2), 0) + c * c2
                    right[a.name][offsets[key] + r] = project((key[0], a.source), out)
    return Bimodule(model, tuple(pairs), left, right, f"{m.name} (x) {n.name}")


@dataclass(frozen=True)
class TensorDims:
    totals: Tuple[int, ...]
    by_pair: Tuple[Dict[Tuple[str, str], int], ...]

    def as_dict(self) -> Dict[str, object]:
        return {
            "totals": list(self.totals),
            "by_pair": [{f"{i},{j}": d for (i, j), d in level.items()} for level in self.by_pair],
        }


def tensor_algebra_dims(model: FiniteAlgebraModel, e: Bimodule, cap: int) -> TensorDims:
    """Dimensions of the tensor powers E^(x)l over L for l = 0..cap."""
    base = algebra_bimodule(model)
    totals, by_pair = [base.dimension], [base.pair_dims()]
    power: Optional[Bimodule] = e
    for level in range(1, cap + 1):
        totals.append(power.dimension)
        by_pair.append(power.pair_dims())
        logger.debug("tensor degree %d: dimension %d", level, power.dimension)
        if level < cap:
            power = tensor_over(power, e) if power.dimension else power
    return TensorDims(tuple(totals), tuple(by_pair))


def preprojective_graded_dims(model: FiniteAlgebraModel, n: int, cap: int, resolution_cap: int = DEFAULT_RESOLUTION_CAP) -> TensorDims:
    return tensor_algebra_dims(model, ext_bimodule(model, n, resolution_cap), cap)
