# Relabeling symmetries of constraint models.  The group is generated by
# transposition, permutations of bands (row blocks) and stacks (column
# blocks), and permutations of lines inside one band or stack; its order is
# 2 * (n! * (n!)^n)^2.  Canonical forms take the lexicographically smallest
# presence vector (R1 most significant, then C1.., then B1..) over the group.

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import factorial

from .board import Board, ConstraintSet


def group_order(board: Board) -> int:
    f = factorial(board.n)
    return 2 * (f * f ** board.n) ** 2


@dataclass(frozen=True)
class LabelPermutation:
    """Permutation of big-constraint ids induced by one board symmetry."""

    board: Board
    mapping: tuple[int, ...]  # mapping[old_id] = new_id

    def __post_init__(self):
        if sorted(self.mapping) != list(range(self.board.num_big)):
            raise ValueError("mapping is not a permutation of the constraint ids")

    @classmethod
    def identity(cls, board: Board) -> "LabelPermutation":
        return cls(board, tuple(range(board.num_big)))

    def apply_mask(self, mask: int) -> int:
        out = 0
        for i, j in enumerate(self.mapping):
            if mask >> i & 1:
                out |= 1 << j
        return out

    def apply(self, cset: ConstraintSet) -> ConstraintSet:
        return ConstraintSet(self.board, self.apply_mask(cset.mask))

    def compose(self, other: "LabelPermutation") -> "LabelPermutation":
        """Permutation acting as `other` first, then self."""
        return LabelPermutation(
            self.board, tuple(self.mapping[j] for j in other.mapping))

    def inverse(self) -> "LabelPermutation":
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return LabelPermutation(self.board, tuple(inv))


def transpose_perm(board: Board) -> LabelPermutation:
    """Reflection across the main diagonal: rows and columns trade places."""
    n, side = board.n, board.side
    mapping = [0] * board.num_big
    for i in range(side):
        mapping[i] = side + i
        mapping[side + i] = i
    for j in range(side):
        br, bc = divmod(j, n)
        mapping[2 * side + j] = 2 * side + bc * n + br
    return LabelPermutation(board, tuple(mapping))


def band_swap_perm(board: Board, a: int, b: int) -> LabelPermutation:
    """Exchange bands a and b (1-based), moving their rows and boxes wholesale."""
    n, side = board.n, board.side
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError(f"band index out of range 1..{n}")
    mapping = list(range(board.num_big))
    for off in range(n):
        ra, rb = (a - 1) * n + off, (b - 1) * n + off
        mapping[ra], mapping[rb] = rb, ra
        ja, jb = 2 * side + ra, 2 * side + rb
        mapping[ja], mapping[jb] = jb, ja
    return LabelPermutation(board, tuple(mapping))


def stack_swap_perm(board: Board, a: int, b: int) -> LabelPermutation:
    """Exchange stacks a and b (1-based), moving their columns and boxes."""
    n, side = board.n, board.side
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError(f"stack index out of range 1..{n}")
    mapping = list(range(board.num_big))
    for off in range(n):
        ca = side + (a - 1) * n + off
        cb = side + (b - 1) * n + off
        mapping[ca], mapping[cb] = cb, ca
        ja = 2 * side + off * n + (a - 1)
        jb = 2 * side + off * n + (b - 1)
        mapping[ja], mapping[jb] = jb, ja
    return LabelPermutation(board, tuple(mapping))


def row_swap_perm(board: Board, a: int, b: int) -> LabelPermutation:
    """Exchange rows a and b, which must lie in the same band."""
    n = board.n
    if (a - 1) // n != (b - 1) // n:
        raise ValueError(f"rows {a} and {b} lie in different bands")
    mapping = list(range(board.num_big))
    mapping[a - 1], mapping[b - 1] = b - 1, a - 1
    return LabelPermutation(board, tuple(mapping))


def col_swap_perm(board: Board, a: int, b: int) -> LabelPermutation:
    """Exchange columns a and b, which must lie in the same stack."""
    n, side = board.n, board.side
    if (a - 1) // n != (b - 1) // n:
        raise ValueError(f"columns {a} and {b} lie in different stacks")
    mapping = list(range(board.num_big))
    mapping[side + a - 1], mapping[side + b - 1] = side + b - 1, side + a - 1
    return LabelPermutation(board, tuple(mapping))


def generators(board: Board) -> tuple[LabelPermutation, ...]:
    """A generating set: transpose, adjacent band/stack swaps, and adjacent
    line swaps inside each band and stack."""
    n = board.n
    gens = [transpose_perm(board)]
    for k in range(1, n):
        gens.append(band_swap_perm(board, k, k + 1))
        gens.append(stack_swap_perm(board, k, k + 1))
    for band in range(n):
        for off in range(n - 1):
            line = band * n + off + 1
            gens.append(row_swap_perm(board, line, line + 1))
            gens.append(col_swap_perm(board, line, line + 1))
    return tuple(gens)


# --- canonical forms -------------------------------------------------------
#
# Every group element factors as (optional transpose) then a band permutation
# sigma, a stack permutation tau, and line permutations inside each band and
# stack.  For fixed (transpose, sigma, tau) the inner line permutations act
# independently on disjoint id segments, so the lexicographic minimum is
# reached by sorting presence bits inside each segment (absent lines get the
# more significant positions).  Minimizing over the 2 * (n!)^2 coarse
# elements therefore minimizes over the whole group.


@lru_cache(maxsize=None)
def _coarse_descriptors(n: int):
    """Per coarse element: (swap_sides, row segment sources, column segment
    sources, box bit image)."""
    side = n * n
    descs = []
    for swap in (False, True):
        for sigma in permutations(range(n)):
            for tau in permutations(range(n)):
                src_rows = [0] * n
                for band in range(n):
                    src_rows[sigma[band]] = band
                src_cols = [0] * n
                for stack in range(n):
                    src_cols[tau[stack]] = stack
                bimg = [0] * side
                for j in range(side):
                    br, bc = divmod(j, n)
                    if swap:
                        br, bc = bc, br
                    bimg[j] = sigma[br] * n + tau[bc]
                descs.append((swap, tuple(src_rows), tuple(src_cols), tuple(bimg)))
    return tuple(descs)


def _element_key(n: int, rows: int, cols: int, boxes: int, desc) -> int:
    side = n * n
    swap, src_r, src_c, bimg = desc
    if swap:
        rows, cols = cols, rows
    seg = (1 << n) - 1
    key = 0
    for k in range(n):
        c = bin(rows >> src_r[k] * n & seg).count("1")
        key |= ((1 << c) - 1) << (3 * side - k * n - n)
        c = bin(cols >> src_c[k] * n & seg).count("1")
        key |= ((1 << c) - 1) << (2 * side - k * n - n)
    for j in range(side):
        if boxes >> j & 1:
            key |= 1 << (side - 1 - bimg[j])
    return key


@lru_cache(maxsize=None)
def _fast_tables(n: int):
    """Chunk-indexed key tables per coarse element, orders n <= 3 only.

    Key(mask) = TR[row chunk] | TC[col chunk] | TB[box chunk], with the
    segment sort and bit placement folded in (row/col chunks traded when the
    element transposes).
    """
    side = n * n
    seg = (1 << n) - 1
    plain, swapped = [], []
    for swap, src_r, src_c, bimg in _coarse_descriptors(n):
        tr, tc, tb = [], [], []
        for x in range(1 << side):
            kr = kc = kb = 0
            for k in range(n):
                c = bin(x >> src_r[k] * n & seg).count("1")
                kr |= ((1 << c) - 1) << (3 * side - k * n - n)
                c = bin(x >> src_c[k] * n & seg).count("1")
                kc |= ((1 << c) - 1) << (2 * side - k * n - n)
            for j in range(side):
                if x >> j & 1:
                    kb |= 1 << (side - 1 - bimg[j])
            tr.append(kr)
            tc.append(kc)
            tb.append(kb)
        entry = (tuple(tr), tuple(tc), tuple(tb))
        (swapped if swap else plain).append(entry)
    return tuple(plain), tuple(swapped)


def canonical_key(cset: ConstraintSet) -> int:
    """Smallest presence vector over the group, packed R1-first."""
    return _canonical_key(cset.board.n, cset.mask)


def _canonical_key(n: int, mask: int) -> int:
    side = n * n
    chunk = (1 << side) - 1
    rows = mask & chunk
    cols = mask >> side & chunk
    boxes = mask >> 2 * side & chunk
    if n <= 3:
        plain, swapped = _fast_tables(n)
        return min(
            min(tr[rows] | tc[cols] | tb[boxes] for tr, tc, tb in plain),
            min(tr[cols] | tc[rows] | tb[boxes] for tr, tc, tb in swapped),
        )
    return min(
        _element_key(n, rows, cols, boxes, desc)
        for desc in _coarse_descriptors(n))


def _key_to_mask(key: int, num_big: int) -> int:
    mask = 0
    for i in range(num_big):
        if key >> (num_big - 1 - i) & 1:
            mask |= 1 << i
    return mask


def canonicalize(cset: ConstraintSet) -> ConstraintSet:
    """Class representative: the group image with the smallest presence vector."""
    return ConstraintSet(
        cset.board, _key_to_mask(canonical_key(cset), cset.board.num_big))


@lru_cache(maxsize=None)
def _segment_patterns(n: int) -> tuple[tuple[int, ...], ...]:
    """n-bit patterns grouped by popcount."""
    pats: list[list[int]] = [[] for _ in range(n + 1)]
    for x in range(1 << n):
        pats[bin(x).count("1")].append(x)
    return tuple(tuple(p) for p in pats)


def group_images(cset: ConstraintSet) -> frozenset[int]:
    """Presence masks of every image of the model under the group."""
    board = cset.board
    n, side = board.n, board.side
    chunk = (1 << side) - 1
    seg = (1 << n) - 1
    rows0 = cset.mask & chunk
    cols0 = cset.mask >> side & chunk
    boxes0 = cset.mask >> 2 * side & chunk
    pats = _segment_patterns(n)
    images: set[int] = set()
    for swap, src_r, src_c, bimg in _coarse_descriptors(n):
        rows, cols = (cols0, rows0) if swap else (rows0, cols0)
        row_opts = []
        col_opts = []
        for k in range(n):
            c = bin(rows >> src_r[k] * n & seg).count("1")
            row_opts.append(tuple(p << k * n for p in pats[c]))
            c = bin(cols >> src_c[k] * n & seg).count("1")
            col_opts.append(tuple(p << k * n for p in pats[c]))
        box_img = 0
        for j in range(side):
            if boxes0 >> j & 1:
                box_img |= 1 << bimg[j]
        box_part = box_img << 2 * side
        row_chunks = [0]
        for opts in row_opts:
            row_chunks = [base | p for base in row_chunks for p in opts]
        col_chunks = [0]
        for opts in col_opts:
            col_chunks = [base | p for base in col_chunks for p in opts]
        images.update(
            r | c << side | box_part for r in row_chunks for c in col_chunks)
    return frozenset(images)


def orbit_size(cset: ConstraintSet) -> int:
    return len(group_images(cset))
