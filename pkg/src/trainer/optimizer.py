# src/trainer/optimizer.py

from typing import Tuple

import numpy as np

from src.network import BranchGrads, BranchNet, DenseLayer, ModelParams, ParamGrads
from src.utils.errors import ShapeError


def _update(theta: np.ndarray, g: np.ndarray, v: np.ndarray, lr: float, momentum: float, name: str):
    if not theta.shape == g.shape == v.shape:
        raise ShapeError(f"{name}: param {theta.shape}, grad {g.shape}, velocity {v.shape} differ")
    v_new = momentum * v + g
    return theta - lr * v_new, v_new


def _step_branch(branch: BranchNet, grads: BranchGrads, vel: BranchGrads, lr: float, momentum: float,
                 name: str) -> Tuple[BranchNet, BranchGrads]:
    W1, vW1 = _update(branch.fc1.W, grads.dW1, vel.dW1, lr, momentum, f"{name}.fc1.W")
    b1, vb1 = _update(branch.fc1.b, grads.db1, vel.db1, lr, momentum, f"{name}.fc1.b")
    W2, vW2 = _update(branch.fc2.W, grads.dW2, vel.dW2, lr, momentum, f"{name}.fc2.W")
    b2, vb2 = _update(branch.fc2.b, grads.db2, vel.db2, lr, momentum, f"{name}.fc2.b")
    return (
        BranchNet(fc1=DenseLayer(W=W1, b=b1), fc2=DenseLayer(W=W2, b=b2)),
        BranchGrads(dW1=vW1, db1=vb1, dW2=vW2, db2=vb2),
    )


def sgd_step(params: ModelParams, grads: ParamGrads, velocity: ParamGrads,
             lr: float, momentum: float) -> Tuple[ModelParams, ParamGrads]:
    """
    Classical momentum: v <- momentum * v + g ; theta <- theta - lr * v.
    momentum = 0 gives plain SGD, theta - lr * g.
    """
    image, v_image = _step_branch(params.image, grads.image, velocity.image, lr, momentum, "image")
    text, v_text = _step_branch(params.text, grads.text, velocity.text, lr, momentum, "text")
    return ModelParams(image=image, text=text), ParamGrads(image=v_image, text=v_text)
