# -*- coding: utf-8 -*-
import numpy as np
import pytest

from core.tensor import ShapeMismatchError, add, as_tensor, clip_box, clip_linf_ball, elementwise, mul, norms, sub


def test_elementwise_examples():
    assert np.array_equal(add([1, 2], [3, 4]), [4, 6])
    x = as_tensor([[0.3, -1.0], [2.5, 0.0]])
    assert np.array_equal(sub(x, x), np.zeros((2, 2)))
    assert np.array_equal(mul([0.5, 2], [2, 0.25]), [1, 0.5])


def test_elementwise_shape_mismatch_names_both_shapes():
    with pytest.raises(ShapeMismatchError, match=r"\(2,\) vs \(3,\)"):
        add(np.zeros(2), np.zeros(3))
    with pytest.raises(ValueError):
        elementwise(np.zeros(2), np.zeros(2), 'div')


def test_as_tensor_copies():
    source = np.array([1.0, 2.0])
    t = as_tensor(source)
    t[0] = 5.0
    assert source[0] == 1.0
    assert t.dtype == np.float64 and t.flags['C_CONTIGUOUS']


def test_norms_examples():
    assert norms([3, -4]) == (7.0, 5.0, 4.0)
    assert norms(np.zeros((2, 3))) == (0.0, 0.0, 0.0)
    assert norms(np.zeros(0)) == (0.0, 0.0, 0.0)


def test_norms_constant_image_matches_scalar_loop():
    d = np.full(784, 0.9)
    l1, l2, linf = norms(d)
    loop_l1, loop_sq = 0.0, 0.0
    for v in d:
        loop_l1 += abs(v)
        loop_sq += v * v
    assert l1 == pytest.approx(705.6, rel=1e-12)
    assert l1 == pytest.approx(loop_l1, rel=1e-12)
    assert l2 == pytest.approx(25.2, rel=1e-12)
    assert l2 == pytest.approx(np.sqrt(loop_sq), rel=1e-12)
    assert linf == 0.9


def test_clip_box_examples():
    assert np.array_equal(clip_box([-0.2, 0.5, 1.3], 0, 1), [0, 0.5, 1])
    assert np.array_equal(clip_box([2, 2], 0, 1), [1, 1])
    x = np.random.default_rng(0).random((3, 4))
    assert np.array_equal(clip_box(x, 0, 1), x)
    with pytest.raises(ValueError):
        clip_box(x, 1, 0)


def test_clip_linf_ball_examples(rng):
    assert clip_linf_ball([0.9], [0.5], 0.3)[0] == pytest.approx(0.8)
    center = rng.random(10)
    assert np.array_equal(clip_linf_ball(rng.random(10), center, 0.0), center)

    x, center = rng.normal(size=(5, 5)), rng.normal(size=(5, 5))
    out = clip_linf_ball(x, center, 0.1)
    assert norms(out - center)[2] <= 0.1 + 1e-12
    with pytest.raises(ShapeMismatchError):
        clip_linf_ball(np.zeros(2), np.zeros(3), 0.1)
    with pytest.raises(ValueError):
        clip_linf_ball(x, center, -0.1)


def test_clip_box_is_idempotent(rng):
    for _ in range(20):
        x = rng.normal(scale=2.0, size=(3, 5, 5))
        lo = rng.uniform(-1.0, 0.5)
        hi = lo + rng.uniform(0.0, 1.5)
        once = clip_box(x, lo, hi)
        assert np.array_equal(clip_box(once, lo, hi), once)
        assert once.min() >= lo and once.max() <= hi


def test_norms_are_ordered(rng):
    for _ in range(50):
        d = rng.normal(scale=rng.uniform(1e-3, 10.0), size=int(rng.integers(1, 200)))
        l1, l2, linf = norms(d)
        assert l1 >= l2 >= linf >= 0.0
