"""Property checks over random inputs."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from reasongym.core import advance, extract_answer, new_state
from reasongym.games.g2048 import merge_line, slide
from reasongym.games.wordle import wordle_feedback
from reasongym.scoring import adjust_scores, minmax_normalize

letters = st.text(alphabet="abcde", min_size=5, max_size=5)
tile = st.sampled_from([0, 2, 4, 8, 16, 32])
nonneg = st.floats(min_value=0, max_value=1e6, allow_nan=False, allow_infinity=False)


@given(letters, letters)
def test_wordle_feedback_counts(secret, guess):
    fb = wordle_feedback(secret, guess)
    assert len(fb) == 5
    for ch in set(guess):
        marked = sum(1 for g, f in zip(guess, fb) if g == ch and f != "X")
        assert marked == min(guess.count(ch), secret.count(ch))
    assert all((f == "G") == (s == g) for s, g, f in zip(secret, guess, fb))


@given(st.lists(tile, min_size=4, max_size=4))
def test_merge_line_conserves_total(row):
    out, gained = merge_line(row)
    assert sum(out) == sum(row)
    assert len(out) == 4 and out.count(0) >= row.count(0)
    assert gained % 4 == 0


@given(st.lists(st.lists(tile, min_size=4, max_size=4), min_size=4, max_size=4), st.sampled_from("UDLR"))
def test_slide_idempotent_without_merges(grid, d):
    once, _ = slide(grid, d)
    twice, gained = slide(once, d)
    if gained == 0:
        assert twice == once


@given(st.lists(st.lists(nonneg, min_size=3, max_size=3), min_size=2, max_size=5))
def test_normalized_scores_in_unit_interval_and_monotone(rows):
    raw = np.array(rows)
    norm = minmax_normalize(adjust_scores(raw))
    assert np.all((norm >= 0) & (norm <= 1))
    for g in range(raw.shape[1]):
        order = np.argsort(raw[:, g], kind="stable")
        assert np.all(np.diff(norm[order, g]) >= -1e-12)


@given(st.lists(st.floats(min_value=1.5, max_value=1e4), min_size=3, max_size=6), st.floats(min_value=0.1, max_value=50))
def test_column_scaling_keeps_ranking(col, c):
    raw = np.array(col)[:, None]
    scaled = raw * c
    if scaled.max() <= 1:
        return
    a = minmax_normalize(adjust_scores(raw))[:, 0]
    b = minmax_normalize(adjust_scores(scaled))[:, 0]
    assert list(np.argsort(a, kind="stable")) == list(np.argsort(b, kind="stable"))


@given(st.text(max_size=40), st.text(alphabet="abcXYZ-> 123", min_size=1, max_size=20).filter(lambda s: s.strip()))
def test_extract_answer_last_marker(prefix, payload):
    text = f"{prefix}\n\nAnswer: decoy\nmore\n\nAnswer: {payload}"
    got = extract_answer(text)
    assert got == payload.strip().strip("`").strip()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["2048", "snake", "trust-evolution", "n-point", "minesweeper"]), st.integers(1, 50),
       st.lists(st.sampled_from(["U", "D", "L", "R", "hit", "stand", "cheat", "cooperate", "reveal(1,1)", "??"]), max_size=25))
def test_replay_and_accounting(game, seed, actions):
    a, b = new_state(game, seed), new_state(game, seed)
    total = 0.0
    for k, act in enumerate(actions):
        if a.done:
            break
        ra, rb = advance(a, f"Answer: {act}"), advance(b, f"Answer: {act}")
        assert ra == rb and a.round == k + 1
        total += ra.score_delta
        assert ra.total_score == total
    assert a.to_json() == b.to_json()
