import itertools

import pytest

from entmono import (
    CoarseningKind,
    Partition,
    PartitionError,
    enumerate_coarsenings,
    format_partition,
    is_coarser,
    parse_partition,
    xi_set,
)
from entmono.errors import GuardError
from entmono.partitions import all_partitions_of_subsets

ANY = CoarseningKind.ANY
A_ = CoarseningKind.DISCARD_BLOCKS
B_ = CoarseningKind.COMBINE_BLOCKS
C_ = CoarseningKind.DISCARD_WITHIN_BLOCK


def P(text, universe):
    return parse_partition(text, universe)


# --- independent oracle: closure over explicit single moves -----------------

def _single_moves(p: Partition):
    blocks = [set(b) for b in p.blocks]
    # discard one block
    if len(blocks) > 1:
        for i in range(len(blocks)):
            rest = blocks[:i] + blocks[i + 1:]
            yield Partition(rest, p.universe)
    # merge two blocks
    for i, j in itertools.combinations(range(len(blocks)), 2):
        merged = [b for k, b in enumerate(blocks) if k not in (i, j)]
        merged.append(blocks[i] | blocks[j])
        yield Partition(merged, p.universe)
    # drop one label from a composite block
    for i, b in enumerate(blocks):
        if len(b) < 2:
            continue
        for lab in b:
            out = [set(x) for x in blocks]
            out[i] = b - {lab}
            yield Partition(out, p.universe)


def _bfs_closure(p: Partition):
    seen = set()
    frontier = [p]
    while frontier:
        nxt = []
        for q in frontier:
            for z in _single_moves(q):
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    seen.discard(p)
    return seen


# --- parsing -----------------------------------------------------------------

def test_parse_and_format_round_trip():
    p = P("AB|C|DE", "ABCDE")
    assert [list(b) for b in p.blocks] == [["A", "B"], ["C"], ["D", "E"]]
    assert format_partition(p) == "AB|C|DE"
    assert parse_partition(format_partition(p), "ABCDE") == p


def test_parse_singletons():
    p = P("A|B|C|D", "ABCD")
    assert p.n_blocks == 4
    assert all(len(b) == 1 for b in p.blocks)


def test_parse_comma_separated_multichar():
    p = parse_partition("Q1,Q2|Q3", ["Q1", "Q2", "Q3"])
    assert format_partition(p) == "Q1,Q2|Q3"


def test_parse_rejects_duplicates_and_unknown():
    with pytest.raises(PartitionError):
        P("A|A|B", "AB")
    with pytest.raises(PartitionError):
        P("A|X", "AB")
    with pytest.raises(PartitionError):
        P("A||B", "AB")


def test_canonical_ordering():
    p = Partition([["C"], ["B", "A"]], "ABC")
    assert format_partition(p) == "AB|C"


# --- single-kind relations ----------------------------------------------------

def test_discard_chain():
    u = "ABCD"
    assert is_coarser(P("A|B|C|D", u), P("A|B|D", u), A_)
    assert is_coarser(P("A|B|C|D", u), P("B|D", u), A_)
    assert not is_coarser(P("A|B|C|D", u), P("A|B|C|D", u), A_)


def test_combine_chain():
    u = "ABCD"
    assert is_coarser(P("A|B|C|D", u), P("AC|B|D", u), B_)
    assert is_coarser(P("A|B|C|D", u), P("AC|BD", u), B_)
    assert not is_coarser(P("A|B|C|D", u), P("A|B|D", u), B_)


def test_discard_within_block():
    u = "ABC"
    assert is_coarser(P("A|BC", u), P("A|B", u), C_)
    assert not is_coarser(P("A|BC", u), P("A", u), C_)
    assert not is_coarser(P("AB|C", u), P("A|B", u), C_)


def test_universe_mismatch_raises():
    with pytest.raises(PartitionError):
        is_coarser(P("A|B", "AB"), P("A|B", "ABC"), ANY)


# --- closure relation ---------------------------------------------------------

def test_any_matches_bfs_closure_three_and_four_labels():
    for text, uni in [("A|B|C", "ABC"), ("AB|C", "ABC"), ("A|B|CD", "ABCD"), ("A|B|C|D", "ABCD")]:
        x = P(text, uni)
        oracle = _bfs_closure(x)
        mine = {z for z in all_partitions_of_subsets(x.cover, x.universe) if is_coarser(x, z, ANY)}
        assert mine == oracle


def test_enumerate_kinds_are_subsets_of_any():
    x = P("A|B|CD", "ABCD")
    every = enumerate_coarsenings(x, ANY)
    for kind in (A_, B_, C_):
        assert enumerate_coarsenings(x, kind) <= every


def test_enumerate_simple_cases():
    x = P("A|B", "AB")
    assert {format_partition(z) for z in enumerate_coarsenings(x, A_)} == {"A", "B"}
    assert {format_partition(z) for z in enumerate_coarsenings(x, B_)} == {"AB"}


def test_strictness_and_transitivity():
    uni = "ABCD"
    parts = list(all_partitions_of_subsets(uni, uni))
    for p in parts:
        assert not is_coarser(p, p, ANY)
    # transitivity on a sample
    import random

    rnd = random.Random(7)
    sample = rnd.sample(parts, 20)
    for x in sample:
        ys = [y for y in parts if is_coarser(x, y, ANY)]
        for y in rnd.sample(ys, min(4, len(ys))):
            for z in parts:
                if is_coarser(y, z, ANY):
                    assert is_coarser(x, z, ANY)


def test_enumeration_guard():
    labels = [chr(ord("A") + i) for i in range(9)]
    with pytest.raises(GuardError):
        enumerate_coarsenings(Partition([[lab] for lab in labels], labels), ANY)


# --- golden target sets ---------------------------------------------------------

XI_1 = {
    "CD|E", "A|CD|E", "B|CD|E", "A|CD", "B|CD", "B|C|E", "B|D|E", "A|D|E", "A|C|E",
    "A|E", "B|E", "A|C", "A|D", "B|C", "B|D", "C|E", "D|E", "AB|CDE", "AB|CD|E",
    "AB|CD", "AB|E",
}

XI_2 = {
    "D|E", "A|D|E", "A|D", "A|E", "B|D|E", "B|D", "B|E", "C|D|E", "C|D", "C|E",
    "AB|D|E", "AB|D", "AB|E", "AC|D|E", "AC|D", "AC|E", "BC|D|E", "BC|D", "BC|E",
    "ABC|DE", "ABC|D|E", "ABC|D", "ABC|E", "AB|DE", "AC|DE", "BC|DE",
}

XI_3 = {"B|C|D", "B|CD", "BC|D", "BD|C", "B|C", "C|D", "B|D"}


def test_xi_golden_one():
    got = {format_partition(z) for z in xi_set(P("A|B|CD|E", "ABCDE"), P("A|B", "ABCDE"))}
    assert got == XI_1
    assert len(got) == 21


def test_xi_golden_two():
    got = {format_partition(z) for z in xi_set(P("A|B|C|D|E", "ABCDE"), P("A|B|C", "ABCDE"))}
    assert got == XI_2
    assert len(got) == 26


def test_xi_golden_three():
    got = {format_partition(z) for z in xi_set(P("A|B|C|D", "ABCD"), P("A|BCD", "ABCD"))}
    assert got == XI_3
    assert len(got) == 7


def test_xi_three_party_discard():
    got = {format_partition(z) for z in xi_set(P("A|B|C", "ABC"), P("A|B", "ABC"))}
    assert got == {"A|C", "B|C", "AB|C"}


def test_xi_merge_pair_targets():
    got = {format_partition(z) for z in xi_set(P("A|B|C", "ABC"), P("A|BC", "ABC"))}
    assert got == {"B|C"}


def test_xi_requires_coarser():
    with pytest.raises(PartitionError):
        xi_set(P("A|B", "ABC"), P("A|C", "ABC"))


def test_xi_subset_and_incomparability_invariants():
    x, y = P("A|B|CD|E", "ABCDE"), P("A|B", "ABCDE")
    coarser = enumerate_coarsenings(x, ANY)
    for z in xi_set(x, y):
        assert z in coarser
        assert not is_coarser(z, y, ANY)
        assert not is_coarser(y, z, ANY)
        assert z != y
