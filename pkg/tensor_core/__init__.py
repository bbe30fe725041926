from .errors import ContractError, DegenerateInputError, ShapeError
from .tensor import DTYPE, Tape, Tensor, active_tape, as_tensor, backward
from .ops import (add, concat, cross_entropy_nll, dropout, embedding_lookup, exp, getitem,
                  layer_norm, log_softmax, masked_fill, matmul, mean, mul, relu, reshape, scale,
                  sigmoid, softmax, stack, sub, sum, swap_last, tanh, transpose)
from .optim import AdamState, adam_step, clip_global_norm, init_adam
