# tests/test_network.py

import numpy as np
import pytest

from src.network import (
    BranchNet, DenseLayer, backward, cross_entropy, embed, forward, init_branch, init_model,
    load_params, one_hot, save_params, softmax,
)
from src.utils.errors import LabelError, ParseError, ShapeError


class TestSoftmaxAndLoss:

    def test_rows_sum_to_one_for_large_logits(self, rng):
        logits = rng.uniform(-1e3, 1e3, size=(50, 7))
        s = softmax(logits)
        np.testing.assert_allclose(s.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(s > 0)

    def test_uniform_cross_entropy_is_log_k(self):
        probs = np.full((4, 5), 0.2)
        assert cross_entropy(probs, np.array([0, 1, 2, 4])) == pytest.approx(np.log(5))

    def test_perfect_prediction(self):
        assert cross_entropy(one_hot(np.array([1, 0]), 3), np.array([1, 0])) == 0.0

    def test_label_out_of_range(self):
        with pytest.raises(LabelError):
            cross_entropy(np.full((2, 3), 1 / 3), np.array([0, 3]))

    def test_softmax_closed_form(self):
        np.testing.assert_allclose(softmax(np.array([[np.log(2.0), 0.0]])), [[2 / 3, 1 / 3]], atol=1e-12)
        np.testing.assert_allclose(softmax(np.zeros((1, 3))), [[1 / 3] * 3], atol=1e-12)

    def test_softmax_shift_invariance(self, rng):
        logits = rng.normal(scale=5.0, size=(20, 6))
        shifts = rng.uniform(-50, 50, size=(20, 1))
        np.testing.assert_allclose(softmax(logits + shifts), softmax(logits), atol=1e-9)


class TestBranch:

    def test_forward_shapes(self, rng):
        branch = init_branch(6, 4, 3, rng)
        cache = forward(branch, rng.normal(size=(8, 6)))
        assert cache.h.shape == (8, 4) and cache.o.shape == (8, 3)
        assert np.all(cache.h >= 0)
        np.testing.assert_allclose(cache.s.sum(axis=1), 1.0)

    def test_wrong_width(self, rng):
        with pytest.raises(ShapeError):
            forward(init_branch(6, 4, 3, rng), np.zeros((2, 5)))

    def test_layers_must_chain(self):
        with pytest.raises(ShapeError):
            BranchNet(fc1=DenseLayer(np.zeros((4, 6)), np.zeros(4)), fc2=DenseLayer(np.zeros((3, 5)), np.zeros(3)))

    @pytest.mark.parametrize("seed", range(5))
    def test_backward_matches_finite_differences(self, seed):
        """CE plus linear terms on h and o, so the injected gradients are exactly grad_h / grad_o."""
        rng = np.random.default_rng(seed)
        branch = init_branch(6, 4, 3, rng)
        x = rng.normal(size=(8, 6))
        y = rng.integers(0, 3, size=8)
        grad_h = rng.normal(size=(8, 4))
        grad_o = rng.normal(size=(8, 3))

        def objective():
            cache = forward(branch, x)
            return cross_entropy(cache.s, y) + np.sum(grad_h * cache.h) + np.sum(grad_o * cache.o)

        grads = backward(branch, forward(branch, x), y, grad_h=grad_h, grad_o=grad_o)
        eps = 1e-6
        for param, analytic in ((branch.fc1.W, grads.dW1), (branch.fc1.b, grads.db1),
                                (branch.fc2.W, grads.dW2), (branch.fc2.b, grads.db2)):
            numeric = np.zeros_like(param)
            for idx in np.ndindex(*param.shape):
                orig = param[idx]
                param[idx] = orig + eps
                up = objective()
                param[idx] = orig - eps
                down = objective()
                param[idx] = orig
                numeric[idx] = (up - down) / (2 * eps)
            err = np.linalg.norm(analytic - numeric) / max(np.linalg.norm(analytic) + np.linalg.norm(numeric), 1e-12)
            assert err < 1e-5

    def test_hand_set_forward(self):
        # x=[1,2]: h_pre = [1-2, 2+1-1] = [-1, 2], h = [0, 2], o = [0+1+0.5, 0+2+0] = [1.5, 2]
        branch = BranchNet(
            fc1=DenseLayer(np.array([[1.0, -1.0], [2.0, 0.5]]), np.array([0.0, -1.0])),
            fc2=DenseLayer(np.array([[1.0, 0.5], [-1.0, 1.0]]), np.array([0.5, 0.0])),
        )
        cache = forward(branch, np.array([[1.0, 2.0]]))
        np.testing.assert_allclose(cache.h_pre, [[-1.0, 2.0]])
        np.testing.assert_allclose(cache.h, [[0.0, 2.0]])
        np.testing.assert_allclose(cache.o, [[1.5, 2.0]])
        e = np.exp(0.5)
        np.testing.assert_allclose(cache.s, [[1 / (1 + e), e / (1 + e)]], atol=1e-12)

    def test_one_hot_output_has_zero_gradients(self, rng):
        # b2 = [800, 0]: exp(-800) underflows, so S is exactly one-hot at label 0
        branch = BranchNet(
            fc1=DenseLayer(rng.normal(size=(4, 6)), rng.normal(size=4)),
            fc2=DenseLayer(np.zeros((3, 4)), np.array([800.0, 0.0, 0.0])),
        )
        cache = forward(branch, rng.normal(size=(5, 6)))
        assert np.array_equal(cache.s, one_hot(np.zeros(5, int), 3))
        grads = backward(branch, cache, np.zeros(5, int))
        for g in (grads.dW1, grads.db1, grads.dW2, grads.db2):
            assert not np.any(g)

    def test_injected_gradients_are_linear(self, rng):
        branch = init_branch(6, 4, 3, rng)
        cache = forward(branch, rng.normal(size=(8, 6)))
        y = rng.integers(0, 3, size=8)
        grad_h, grad_o = rng.normal(size=(8, 4)), rng.normal(size=(8, 3))
        base = backward(branch, cache, y)
        once = backward(branch, cache, y, grad_h=grad_h, grad_o=grad_o)
        twice = backward(branch, cache, y, grad_h=2 * grad_h, grad_o=2 * grad_o)
        for name in ("dW1", "db1", "dW2", "db2"):
            b, g1, g2 = getattr(base, name), getattr(once, name), getattr(twice, name)
            np.testing.assert_allclose(g2 - b, 2 * (g1 - b), atol=1e-12)

    def test_bad_injection_shape(self, rng):
        branch = init_branch(6, 4, 3, rng)
        cache = forward(branch, rng.normal(size=(8, 6)))
        with pytest.raises(ShapeError):
            backward(branch, cache, np.zeros(8, int), grad_h=np.zeros((8, 3)))


class TestModelParams:

    def test_init_is_deterministic(self):
        a = init_model(6, 8, 5, 3, seed=1)
        b = init_model(6, 8, 5, 3, seed=1)
        assert np.array_equal(a.image.fc1.W, b.image.fc1.W)
        assert np.array_equal(a.text.fc2.W, b.text.fc2.W)
        assert not np.any(a.image.fc1.b)

    def test_embed_kinds(self, tiny_params, rng):
        x = rng.normal(size=(4, 6))
        probs = embed(tiny_params.image, x, "probability")
        logits = embed(tiny_params.image, x, "logit")
        np.testing.assert_allclose(probs.sum(axis=1), 1.0)
        np.testing.assert_allclose(softmax(logits), probs)

    def test_embed_validates_input(self, tiny_params, rng):
        x = rng.normal(size=6)
        single = embed(tiny_params.image, x)
        assert single.shape == (1, 3)
        np.testing.assert_allclose(single, embed(tiny_params.image, x[None, :]))
        with pytest.raises(ValueError):
            embed(tiny_params.image, np.full((2, 6), np.nan))

    def test_save_load_is_exact(self, tiny_params, tmp_path):
        path = str(tmp_path / "model.npz")
        save_params(tiny_params, path)
        loaded = load_params(path)
        for name in ("image", "text"):
            for layer in ("fc1", "fc2"):
                a = getattr(getattr(tiny_params, name), layer)
                b = getattr(getattr(loaded, name), layer)
                assert np.array_equal(a.W, b.W) and np.array_equal(a.b, b.b)

    def test_load_garbage(self, tmp_path):
        path = tmp_path / "model.npz"
        path.write_text("not a model")
        with pytest.raises(ParseError):
            load_params(str(path))

    def test_load_wrong_version(self, tiny_params, tmp_path):
        path = str(tmp_path / "old.npz")
        np.savez(path, format_version=np.array(0))
        with pytest.raises(ParseError):
            load_params(path)
