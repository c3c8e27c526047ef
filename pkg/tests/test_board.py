import pytest

from redoku.board import (BOX, COL, ROW, Board, ConstraintSet, Grid, chutes,
                          chute_members, parse_missing, pattern_solution,
                          region_cells, verify_grid)


def test_board_dimensions(board):
    assert board.side == 9
    assert board.num_cells == 81
    assert board.num_big == 27
    assert board.full_mask == (1 << 27) - 1


def test_cell_index_round_trip(board):
    seen = set()
    for r in range(1, 10):
        for c in range(1, 10):
            flat = board.cell_index(r, c)
            assert board.cell_coords(flat) == (r, c)
            seen.add(flat)
    assert seen == set(range(81))


def test_cell_index_rejects_out_of_range(board):
    for r, c in ((0, 1), (1, 0), (10, 1), (1, 10)):
        with pytest.raises(ValueError):
            board.cell_index(r, c)


def test_box_layout(board):
    assert board.box_of(1, 1) == 1
    assert board.box_of(1, 9) == 3
    assert board.box_of(5, 5) == 5
    assert board.box_of(9, 1) == 7
    assert board.box_of(9, 9) == 9


def test_id_label_round_trip(board):
    labels = [board.id_label(i) for i in range(27)]
    assert labels[0] == "R1" and labels[8] == "R9"
    assert labels[9] == "C1" and labels[17] == "C9"
    assert labels[18] == "B1" and labels[26] == "B9"
    for i, label in enumerate(labels):
        assert board.parse_label(label) == i
        assert board.parse_label(label.lower()) == i


def test_parse_label_rejects_garbage(board):
    for bad in ("", "R0", "R10", "X1", "B", "12"):
        with pytest.raises(ValueError):
            board.parse_label(bad)


def test_region_cells_partition(board):
    for kind in (ROW, COL, BOX):
        cover = []
        for idx in range(1, 10):
            cover.extend(region_cells(board.make_id(kind, idx), board))
        assert sorted(cover) == list(range(81))
    row4 = region_cells(board.make_id(ROW, 4), board)
    assert [board.cell_coords(c) for c in row4] == [(4, c) for c in range(1, 10)]


def test_each_cell_in_three_regions(board):
    for cell in range(81):
        kinds = sorted(board.id_kind(cid) for cid in board.cell_region_ids[cell])
        assert kinds == [ROW, COL, BOX]


def test_chute_members(board):
    cs = chutes(board)
    assert len(cs) == 6
    lines, boxes = chute_members(cs[0], board)
    assert [board.id_label(i) for i in lines] == ["R1", "R2", "R3"]
    assert [board.id_label(i) for i in boxes] == ["B1", "B2", "B3"]
    lines, boxes = chute_members(cs[5], board)
    assert [board.id_label(i) for i in lines] == ["C7", "C8", "C9"]
    assert [board.id_label(i) for i in boxes] == ["B3", "B6", "B9"]


def test_constraint_set_round_trip(board):
    cset = parse_missing(board, "C2,R5,B2,B5,B7")
    assert cset.num_missing == 5
    assert cset.missing_labels() == "R5,C2,B2,B5,B7"
    assert parse_missing(board, cset.missing_labels()) == cset
    assert parse_missing(board, "missing=" + cset.missing_labels()) == cset


def test_parse_missing_empty_is_full(board):
    assert parse_missing(board, "") == ConstraintSet.full(board)
    assert parse_missing(board, "  ").is_full()


def test_parse_missing_rejects_unknown_label(board):
    with pytest.raises(ValueError, match="ZZ"):
        parse_missing(board, "B2,ZZ")


def test_from_missing_deduplicates(board):
    a = ConstraintSet.from_missing(board, ["R1", "R1", "C3"])
    b = ConstraintSet.from_missing(board, ["C3", "R1"])
    assert a == b and a.num_missing == 2


def test_grid_accessors(board):
    grid = pattern_solution(board)
    assert grid.is_complete()
    assert grid.assigned_count() == 81
    assert grid.get(1, 1) == 1
    empty = Grid.empty(board)
    assert empty.assigned_count() == 0
    assert not empty.is_complete()


def test_grid_swap(board):
    grid = pattern_solution(board)
    swapped = grid.with_swapped((1, 1), (9, 9))
    assert swapped.get(1, 1) == grid.get(9, 9)
    assert swapped.get(9, 9) == grid.get(1, 1)
    assert swapped.with_swapped((1, 1), (9, 9)) == grid


def test_grid_line_round_trip(board):
    grid = pattern_solution(board)
    line = grid.to_line()
    assert len(line) == 81 and line.isdigit()
    assert Grid.from_values(board, (int(ch) for ch in line)) == grid


def test_pattern_solution_is_valid(board):
    for shift in range(3):
        grid = pattern_solution(board, shift)
        assert verify_grid(grid, ConstraintSet.full(board)) == frozenset()


def test_verify_grid_pinpoints_violations(board):
    grid = pattern_solution(board)
    # Swapping two cells of one row violates exactly their columns' and
    # boxes' constraints; the shared row stays a permutation.
    swapped = grid.with_swapped((1, 1), (1, 9))
    violated = verify_grid(swapped, ConstraintSet.full(board))
    labels = {board.id_label(i) for i in violated}
    assert labels == {"C1", "C9", "B1", "B3"}
    cset = parse_missing(board, "C1,C9,B1,B3")
    assert verify_grid(swapped, cset) == frozenset()


def test_verify_grid_rejects_incomplete(board):
    with pytest.raises(ValueError):
        verify_grid(Grid.empty(board), ConstraintSet.full(board))


def test_order_two_board(board2):
    assert board2.side == 4
    assert board2.num_big == 12
    assert board2.num_cells == 16
    grid = pattern_solution(board2)
    assert verify_grid(grid, ConstraintSet.full(board2)) == frozenset()
