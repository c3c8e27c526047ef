# Redundancy lemmas over chutes and their fixpoint closure.
#
# Inside one chute, the n line constraints together entail any one box once
# the other n-1 boxes are present (step kind "LemmaI"), and dually the n
# boxes entail a missing line when the other n-1 lines are present
# ("LemmaII").  Closing a model under both steps is confluent, so the
# fixpoint is order-independent even though the recorded trace is not.

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .board import Board, Chute, ConstraintSet, chute_members, chutes

LEMMA_I = "LemmaI"
LEMMA_II = "LemmaII"


@dataclass(frozen=True)
class Step:
    """One lemma application: which chute fired and which id it derived."""

    chute: Chute
    lemma: str
    derived: int

    def render(self, board: Board) -> str:
        return f"{self.lemma} {self.chute.label} derives {board.id_label(self.derived)}"


@lru_cache(maxsize=None)
def _chute_tables(n: int) -> tuple[tuple[Chute, int, int], ...]:
    """(chute, line mask, box mask) triples, H1..Hn then V1..Vn."""
    board = Board(n)
    out = []
    for ch in chutes(board):
        lines, boxes = chute_members(ch, board)
        lmask = 0
        for i in lines:
            lmask |= 1 << i
        bmask = 0
        for i in boxes:
            bmask |= 1 << i
        out.append((ch, lmask, bmask))
    return tuple(out)


def _step_for_chute(mask: int, ch: Chute, lmask: int, bmask: int) -> Optional[Step]:
    if mask & lmask == lmask:
        gap = bmask & ~mask
        if gap and gap & (gap - 1) == 0:
            return Step(ch, LEMMA_I, gap.bit_length() - 1)
    if mask & bmask == bmask:
        gap = lmask & ~mask
        if gap and gap & (gap - 1) == 0:
            return Step(ch, LEMMA_II, gap.bit_length() - 1)
    return None


def applicable_steps(cset: ConstraintSet) -> tuple[Step, ...]:
    """Steps that fire on the model right now, in chute order H1..Vn."""
    steps = []
    for ch, lmask, bmask in _chute_tables(cset.board.n):
        step = _step_for_chute(cset.mask, ch, lmask, bmask)
        if step is not None:
            steps.append(step)
    return tuple(steps)


def closure(cset: ConstraintSet) -> tuple[ConstraintSet, tuple[Step, ...]]:
    """Fixpoint under both lemmas plus the trace of applied steps.

    Always applies the first applicable step in chute order, so the trace is
    deterministic; by confluence the fixpoint itself does not depend on the
    strategy.
    """
    tables = _chute_tables(cset.board.n)
    mask = cset.mask
    trace = []
    while True:
        for ch, lmask, bmask in tables:
            step = _step_for_chute(mask, ch, lmask, bmask)
            if step is not None:
                trace.append(step)
                mask |= 1 << step.derived
                break
        else:
            return ConstraintSet(cset.board, mask), tuple(trace)


def close_mask(n: int, mask: int) -> int:
    """Closure fixpoint on a bare presence mask (hot path, no trace)."""
    tables = _chute_tables(n)
    changed = True
    while changed:
        changed = False
        for _, lmask, bmask in tables:
            if mask & lmask == lmask:
                gap = bmask & ~mask
                if gap and gap & (gap - 1) == 0:
                    mask |= gap
                    changed = True
            if mask & bmask == bmask:
                gap = lmask & ~mask
                if gap and gap & (gap - 1) == 0:
                    mask |= gap
                    changed = True
    return mask


@dataclass(frozen=True)
class Verdict:
    """Outcome of classifying a model by closure plus a negative catalog."""

    kind: str  # "sudoku" | "not-sudoku" | "unresolved"
    fixpoint: ConstraintSet
    trace: tuple[Step, ...]
    matched: Optional[ConstraintSet] = None  # catalog entry that applied

    @property
    def is_sudoku(self) -> bool:
        return self.kind == "sudoku"


def classify(cset: ConstraintSet, catalog=()) -> Verdict:
    """Close the model; a full fixpoint proves it Sudoku.  Otherwise look for
    a catalog entry one of whose group images is missing-subset of the
    fixpoint (removing even more constraints keeps it non-Sudoku)."""
    from .symmetry import group_images

    fix, trace = closure(cset)
    if fix.is_full():
        return Verdict("sudoku", fix, trace)
    for entry in catalog:
        if entry.board != cset.board:
            raise ValueError("catalog entry for a different board order")
        for image in group_images(entry):
            if fix.mask & ~image == 0:
                return Verdict("not-sudoku", fix, trace, entry)
    return Verdict("unresolved", fix, trace)
