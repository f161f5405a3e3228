# src/network/__init__.py

from .layers import DenseLayer, init_dense, relu, softmax, cross_entropy, one_hot, check_labels
from .branch import BranchNet, BranchGrads, ForwardCache, init_branch, forward, backward
from .params import (
    MODEL_FORMAT_VERSION, ModelParams, ParamGrads, init_model, embed, save_params, load_params,
)

__all__ = [
    'DenseLayer', 'init_dense', 'relu', 'softmax', 'cross_entropy', 'one_hot', 'check_labels',
    'BranchNet', 'BranchGrads', 'ForwardCache', 'init_branch', 'forward', 'backward',
    'MODEL_FORMAT_VERSION', 'ModelParams', 'ParamGrads', 'init_model', 'embed',
    'save_params', 'load_params',
]
