"""Hilbert-Kunz numbers e_n(f) = dim k[x]/(x_1^q, ..., x_d^q, f), q = 2^n.

e_n(f) is the corank of multiplication by f on the box quotient, whose
monomial basis has q^d elements. When f is homogeneous for some gradings
of the polynomial ring the map splits into blocks (source grade s goes to
grade s + deg f) and the rank is the sum of block ranks.

The quartic g_a is homogeneous for the standard grading and for the Z/3
grading x -> 1, y -> 2, z -> 0; u*v + g_a additionally for the weights
(1,1,1,2,2) and the torus weight u -> 1, v -> -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numba import njit

from .field import FieldContext, FieldElement, build_field, subfield_isomorphism, to_minimal_field
from .linalg import RankKernel
from .polynomial import Box, MultiPoly, multiply, power_sequence, quartic, smoothed

# (weights, modulus); modulus 0 means a Z-grading
Grading = Tuple[Tuple[int, ...], int]

CANDIDATE_GRADINGS: Dict[int, Tuple[Grading, ...]] = {
    3: (((1, 1, 1), 0), ((1, 2, 0), 3)),
    5: (((1, 1, 1, 2, 2), 0), ((1, 2, 0, 0, 0), 3), ((0, 0, 0, 1, -1), 0)),
}


def detect_gradings(f: MultiPoly) -> Tuple[Grading, ...]:
    """Gradings (from the candidate list) for which f is homogeneous."""
    cands = CANDIDATE_GRADINGS.get(f.nvars, (((1,) * f.nvars, 0),))
    return tuple(g for g in cands if f.is_homogeneous(*g))


def _grade(exps: np.ndarray, grading: Grading) -> np.ndarray:
    w, mod = grading
    g = exps @ np.asarray(w, dtype=np.int64)
    return g % mod if mod else g


@dataclass
class BoxLayout:
    """Monomials of the box grouped into graded blocks."""

    q: int
    nvars: int
    gradings: Tuple[Grading, ...]
    keys: List[Tuple[int, ...]]
    members: List[np.ndarray]      # flat indices per block, ascending
    position: np.ndarray           # flat index -> row inside its block
    key_index: Dict[Tuple[int, ...], int]

    @property
    def size(self) -> int:
        return self.q ** self.nvars


@lru_cache(maxsize=32)
def box_layout(q: int, nvars: int, gradings: Tuple[Grading, ...]) -> BoxLayout:
    total = q ** nvars
    flat = np.arange(total, dtype=np.int64)
    exps = np.empty((total, nvars), dtype=np.int64)
    rest = flat.copy()
    for k in range(nvars):
        exps[:, k] = rest % q
        rest //= q
    if gradings:
        grades = np.stack([_grade(exps, g) for g in gradings], axis=1)
        uniq, inverse = np.unique(grades, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
    else:
        uniq = np.zeros((1, 0), dtype=np.int64)
        inverse = np.zeros(total, dtype=np.int64)
    order = np.argsort(inverse, kind="stable")
    counts = np.bincount(inverse, minlength=len(uniq))
    splits = np.cumsum(counts)[:-1]
    members = np.split(flat[order], splits)
    position = np.empty(total, dtype=np.int64)
    for mem in members:
        position[mem] = np.arange(len(mem), dtype=np.int64)
    keys = [tuple(int(v) for v in row) for row in uniq]
    return BoxLayout(q, nvars, gradings, keys, members, position, {k: i for i, k in enumerate(keys)})


@njit(cache=True)
def _fill_block(mat, src, term_exps, term_coeffs, q, nvars, position):
    """mat[position[s * m], col] ^= c for each source s and term c*m inside the box."""
    nterms = term_exps.shape[0]
    se = np.empty(nvars, dtype=np.int64)
    for col in range(src.shape[0]):
        s = src[col]
        r = s
        for k in range(nvars):
            se[k] = r % q
            r //= q
        for t in range(nterms):
            tgt = 0
            stride = 1
            ok = True
            for k in range(nvars):
                e = se[k] + term_exps[t, k]
                if e >= q:
                    ok = False
                    break
                tgt += e * stride
                stride *= q
            if ok:
                mat[position[tgt], col] ^= term_coeffs[t]


def _coefficient_field(f: MultiPoly) -> Tuple[FieldContext, MultiPoly]:
    """Move f to the smallest field containing its coefficients."""
    m = f.coefficient_field_degree() if f.terms else 1
    if m == f.ctx.degree:
        return f.ctx, f
    iso = subfield_isomorphism(f.ctx, m)
    small = build_field(m)
    return small, f.map_coefficients(small, iso.__getitem__)


@lru_cache(maxsize=None)
def _kernel(ctx: FieldContext) -> RankKernel:
    return RankKernel(ctx)


def graded_blocks(f: MultiPoly, n: int, gradings: Optional[Tuple[Grading, ...]] = None):
    """Yield (source_key, target_key, matrix) for multiplication by f on the box.

    Matrix entries are field ints of f's context; rows index target
    monomials, columns source monomials.
    """
    q = 1 << n
    if gradings is None:
        gradings = detect_gradings(f)
    elif not all(f.is_homogeneous(*g) for g in gradings):
        raise ValueError("f is not homogeneous for the requested gradings")
    layout = box_layout(q, f.nvars, tuple(gradings))
    box = Box(n, f.nvars)
    fr = f.truncate(box)
    if not fr.terms:
        return
    items = sorted(fr.terms.items())
    term_exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), f.nvars)
    coeffs = np.array([c for _, c in items], dtype=np.int64)
    shift = tuple(int(v) for v in (
        [_grade(term_exps[:1], g)[0] for g in gradings] if gradings else []))
    for i, key in enumerate(layout.keys):
        tkey = tuple(
            (a + b) % g[1] if g[1] else a + b for a, b, g in zip(key, shift, gradings))
        j = layout.key_index.get(tkey)
        if j is None:
            continue
        src = layout.members[i]
        mat = np.zeros((len(layout.members[j]), len(src)), dtype=np.int64)
        _fill_block(mat, src, term_exps, coeffs, q, f.nvars, layout.position)
        yield key, tkey, mat


@dataclass
class GradedMap:
    """Multiplication by f split into blocks keyed by source grade."""

    gradings: Tuple[Grading, ...]
    blocks: Dict[Tuple[int, ...], np.ndarray]

    def rank(self, ctx: FieldContext) -> int:
        kernel = _kernel(ctx)
        return sum(kernel.rank(m.copy()) for m in self.blocks.values())


def graded_map(f: MultiPoly, n: int) -> GradedMap:
    gradings = detect_gradings(f)
    return GradedMap(gradings, {k: m for k, _, m in graded_blocks(f, n, gradings)})


def multiplication_rank(f: MultiPoly, n: int, gradings: Optional[Tuple[Grading, ...]] = None) -> int:
    """Rank of multiplication by f on the level-n box quotient."""
    ctx, f = _coefficient_field(f)
    kernel = _kernel(ctx)
    return sum(kernel.rank(mat) for _, _, mat in graded_blocks(f, n, gradings))


def hk_number(f: MultiPoly, n: int, gradings: Optional[Tuple[Grading, ...]] = None) -> int:
    """e_n(f) = q^d - rank(multiplication by f), q = 2^n.

    Pass ``gradings=()`` to force a single ungraded block.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return (1 << n) ** f.nvars - multiplication_rank(f, n, gradings)


def dense_matrix(f: MultiPoly, n: int) -> np.ndarray:
    """The full q^d x q^d multiplication matrix (rows: targets)."""
    q = 1 << n
    layout = box_layout(q, f.nvars, ())
    box = Box(n, f.nvars)
    fr = f.truncate(box)
    mat = np.zeros((layout.size, layout.size), dtype=np.int64)
    if fr.terms:
        items = sorted(fr.terms.items())
        term_exps = np.array([e for e, _ in items], dtype=np.int64)
        coeffs = np.array([c for _, c in items], dtype=np.int64)
        _fill_block(mat, layout.members[0], term_exps, coeffs, q, f.nvars, layout.position)
    return mat


# ---------------------------------------------------------------------------
# Powers of the quartic
# ---------------------------------------------------------------------------

def _minimal_alpha(alpha: FieldElement) -> FieldElement:
    return to_minimal_field(alpha)


# (alpha serial, n) -> (values so far, last power mod the box)
_POWER_CACHE: Dict[Tuple[str, int], Tuple[List[int], MultiPoly]] = {}


def _power_hk(alpha: FieldElement, n: int, jmax: int) -> List[int]:
    key = (alpha.serialize(), n)
    values, last = _POWER_CACHE.get(key, ([], None))
    if len(values) < jmax:
        box = Box(n, 3)
        base = quartic(alpha).truncate(box)
        full = 8 ** n
        values = list(values)
        while len(values) < jmax:
            last = base if last is None else multiply(last, base, box)
            values.append(full - multiplication_rank(last, n) if last.terms else full)
        _POWER_CACHE[key] = (values, last)
    return values[:jmax]


def clear_cache():
    _POWER_CACHE.clear()


def hk_power_sequence(alpha: FieldElement, n: int, jmax: int, use_shortcuts: bool = False) -> List[int]:
    """[e_n(g_a^j) for j = 1..jmax].

    With ``use_shortcuts`` even powers come from the level below through
    e_{n+1}(g^(2j)) = 8 e_n(g^j) and only odd powers are ranked.
    """
    if jmax <= 0:
        return []
    alpha = _minimal_alpha(alpha)
    if not use_shortcuts or n == 0:
        return _power_hk(alpha, n, jmax)
    lower = hk_power_sequence(alpha, n - 1, jmax // 2, True)
    g = quartic(alpha)
    box = Box(n, 3)
    full = 8 ** n
    out = []
    for j, p in enumerate(power_sequence(g, jmax, box), start=1):
        if j % 2 == 0:
            out.append(8 * lower[j // 2 - 1])
        else:
            out.append(full - multiplication_rank(p, n) if p.terms else full)
    return out


def hk_power(alpha: FieldElement, n: int, j: int) -> int:
    """e_n(g_a^j), with e_n(g^0) := 0 (the unit ideal)."""
    if j == 0:
        return 0
    return hk_power_sequence(alpha, n, j)[-1]


def hk_smoothed(alpha: FieldElement, n: int, mode: str = "lemma_sum", direct_ceiling: int = 2) -> int:
    """e_n(u*v + g_a) from the power sequence or from the 5-variable map."""
    alpha = _minimal_alpha(alpha)
    if mode == "direct":
        if n > direct_ceiling:
            raise ValueError(f"direct mode limited to n <= {direct_ceiling}")
        return hk_number(smoothed(alpha), n)
    if mode != "lemma_sum":
        raise ValueError(f"unknown mode {mode!r}")
    if n == 0:
        return 1
    q = 1 << n
    seq = hk_power_sequence(alpha, n, q)
    return 2 * sum(seq[:q - 1]) + seq[q - 1]
