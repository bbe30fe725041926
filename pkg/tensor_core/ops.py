"""
Differentiable operations over Tensor.

Broadcasting is limited to the cases the models use and is documented per op:
  add/sub/mul   numpy broadcasting of the second operand against the first
                (bias rows, [B,1,H] against [B,S,H], scalars); gradients are
                summed back to each operand's shape.
  matmul        2-D @ 2-D, N-D @ 2-D (shared weight) and N-D @ N-D with equal
                leading dimensions.
Everything else is shape-preserving or reduces explicitly named axes.
"""
import numpy as np

from .errors import ContractError, DegenerateInputError, ShapeError
from .tensor import DTYPE, Tensor, active_tape, as_tensor

MASK_FILL = -1e9


def _result(data, inputs, backward):
    tape = active_tape()
    needs = tape is not None and any(t.requires_grad for t in inputs)
    out = Tensor(data, requires_grad=needs)
    if needs:
        tape.record(inputs, out, backward)
    return out


def _unbroadcast(grad, shape):
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _check_broadcast(a, b, name):
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError(f"{name}: cannot combine shapes {a.shape} and {b.shape}") from None


def add(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _check_broadcast(a, b, "add")
    return _result(a.data + b.data, (a, b),
                   lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)))


def sub(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _check_broadcast(a, b, "sub")
    return _result(a.data - b.data, (a, b),
                   lambda g: (_unbroadcast(g, a.shape), -_unbroadcast(g, b.shape)))


def mul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _check_broadcast(a, b, "mul")
    return _result(a.data * b.data, (a, b),
                   lambda g: (_unbroadcast(g * b.data, a.shape),
                              _unbroadcast(g * a.data, b.shape)))


def scale(a, c):
    c = float(c)
    return _result(a.data * c, (a,), lambda g: (g * c,))


def matmul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"matmul: shapes {a.shape} and {b.shape} do not align")
    if b.ndim > 2 and a.shape[:-2] != b.shape[:-2]:
        raise ShapeError(f"matmul: batch dimensions differ, {a.shape} and {b.shape}")
    out = np.matmul(a.data, b.data)

    def back(g):
        ga = np.matmul(g, np.swapaxes(b.data, -1, -2))
        if b.ndim == 2 and a.ndim > 2:
            q, r = b.shape
            gb = a.data.reshape(-1, q).T @ g.reshape(-1, r)
        else:
            gb = np.matmul(np.swapaxes(a.data, -1, -2), g)
        return ga, gb

    return _result(out, (a, b), back)


def transpose(x, axes):
    axes = tuple(axes)
    if sorted(axes) != list(range(x.ndim)):
        raise ShapeError(f"transpose: axes {axes} invalid for shape {x.shape}")
    inverse = tuple(np.argsort(axes))
    return _result(np.transpose(x.data, axes), (x,), lambda g: (np.transpose(g, inverse),))


def swap_last(x):
    axes = list(range(x.ndim))
    axes[-1], axes[-2] = axes[-2], axes[-1]
    return transpose(x, axes)


def reshape(x, shape):
    shape = tuple(shape)
    try:
        out = x.data.reshape(shape)
    except ValueError:
        raise ShapeError(f"reshape: cannot view {x.shape} as {shape}") from None
    return _result(out, (x,), lambda g: (g.reshape(x.shape),))


def _is_basic(index):
    parts = index if isinstance(index, tuple) else (index,)
    return all(p is None or p is Ellipsis or isinstance(p, (int, np.integer, slice)) for p in parts)


def getitem(x, index):
    out = x.data[index]
    basic = _is_basic(index)

    def back(g):
        full = np.zeros_like(x.data)
        if basic:
            full[index] += g
        else:
            np.add.at(full, index, g)
        return (full,)

    return _result(out, (x,), back)


def concat(tensors, axis=-1):
    tensors = [as_tensor(t) for t in tensors]
    try:
        out = np.concatenate([t.data for t in tensors], axis=axis)
    except ValueError as e:
        raise ShapeError(f"concat: {e}") from None
    bounds = np.cumsum([t.shape[axis] for t in tensors])[:-1]
    return _result(out, tensors, lambda g: tuple(np.split(g, bounds, axis=axis)))


def stack(tensors, axis=0):
    tensors = [as_tensor(t) for t in tensors]
    shapes = {t.shape for t in tensors}
    if len(shapes) != 1:
        raise ShapeError(f"stack: mixed shapes {sorted(shapes)}")
    out = np.stack([t.data for t in tensors], axis=axis)
    n = len(tensors)
    return _result(out, tensors,
                   lambda g: tuple(np.squeeze(s, axis=axis) for s in np.split(g, n, axis=axis)))


def sum(x, axis=None, keepdims=False):
    out = x.data.sum(axis=axis, keepdims=keepdims)

    def back(g):
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, x.shape).copy(),)

    return _result(out, (x,), back)


def mean(x, axis=None, keepdims=False):
    count = x.data.size if axis is None else np.prod([x.shape[a] for a in np.atleast_1d(axis)])
    return scale(sum(x, axis=axis, keepdims=keepdims), 1.0 / count)


def tanh(x):
    y = np.tanh(x.data)
    return _result(y, (x,), lambda g: (g * (1.0 - y * y),))


def sigmoid(x):
    y = 0.5 * (1.0 + np.tanh(0.5 * x.data))
    return _result(y, (x,), lambda g: (g * y * (1.0 - y),))


def relu(x):
    y = np.maximum(x.data, 0.0)
    return _result(y, (x,), lambda g: (g * (x.data > 0),))


def exp(x):
    y = np.exp(x.data)
    return _result(y, (x,), lambda g: (g * y,))


def _axis(x, axis):
    if not -x.ndim <= axis < x.ndim:
        raise ShapeError(f"axis {axis} out of range for shape {x.shape}")
    return axis % x.ndim


def _stable_softmax(data, axis):
    shifted = data - data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=axis, keepdims=True)


def _stable_log_softmax(data, axis):
    shifted = data - data.max(axis=axis, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=axis, keepdims=True))


def softmax(x, axis=-1):
    axis = _axis(x, axis)
    y = _stable_softmax(x.data, axis)
    return _result(y, (x,), lambda g: (y * (g - (g * y).sum(axis=axis, keepdims=True)),))


def log_softmax(x, axis=-1):
    axis = _axis(x, axis)
    y = _stable_log_softmax(x.data, axis)
    p = np.exp(y)
    return _result(y, (x,), lambda g: (g - p * g.sum(axis=axis, keepdims=True),))


def layer_norm(x, gamma, beta, eps=1e-5):
    d = x.shape[-1]
    if gamma.shape != (d,) or beta.shape != (d,):
        raise ShapeError(f"layer_norm: gamma {gamma.shape} / beta {beta.shape} do not match last dim {d}")
    mu = x.data.mean(axis=-1, keepdims=True)
    centered = x.data - mu
    inv = 1.0 / np.sqrt((centered ** 2).mean(axis=-1, keepdims=True) + eps)
    xhat = centered * inv
    out = xhat * gamma.data + beta.data

    def back(g):
        lead = tuple(range(g.ndim - 1))
        dxhat = g * gamma.data
        dx = inv / d * (d * dxhat
                        - dxhat.sum(axis=-1, keepdims=True)
                        - xhat * (dxhat * xhat).sum(axis=-1, keepdims=True))
        return dx, (g * xhat).sum(axis=lead), g.sum(axis=lead)

    return _result(out, (x, gamma, beta), back)


def embedding_lookup(E, ids):
    """Rows of E selected by integer ids of any shape; output is ids.shape + (d,)."""
    ids = np.asarray(ids, dtype=np.int64)
    if E.ndim != 2:
        raise ShapeError(f"embedding matrix must be 2-D, got {E.shape}")
    bad = ids[(ids < 0) | (ids >= E.shape[0])]
    if bad.size:
        raise IndexError(f"embedding id {int(bad[0])} outside vocabulary of size {E.shape[0]}")

    def back(g):
        full = np.zeros_like(E.data)
        np.add.at(full, ids.reshape(-1), g.reshape(-1, E.shape[1]))
        return (full,)

    return _result(E.data[ids], (E,), back)


def masked_fill(x, keep, value=MASK_FILL):
    """Replace positions where ``keep`` is False by ``value``; keep broadcasts against x."""
    keep = np.broadcast_to(np.asarray(keep, dtype=bool), x.shape)
    out = np.where(keep, x.data, value)
    return _result(out, (x,), lambda g: (np.where(keep, g, 0.0),))


def dropout(x, rate, rng, training=True):
    if not training or rate <= 0.0:
        return x
    if not 0.0 <= rate < 1.0:
        raise ContractError(f"dropout rate must be in [0, 1), got {rate}")
    keep = (rng.random(x.shape) >= rate) / (1.0 - rate)
    return _result(x.data * keep, (x,), lambda g: (g * keep,))


def cross_entropy_nll(logits, targets, ignore_index=0, reduction="mean"):
    """Negative log-likelihood of ``targets`` under softmax(logits) on the last axis.

    Positions whose target equals ``ignore_index`` count neither in the loss
    nor in the denominator. ``reduction="sum"`` returns the summed NLL.
    """
    if reduction not in ("mean", "sum"):
        raise ContractError(f"unknown reduction {reduction!r}")
    targets = np.asarray(targets, dtype=np.int64)
    vocab = logits.shape[-1]
    if logits.shape[:-1] != targets.shape:
        raise ShapeError(f"cross_entropy_nll: logits {logits.shape} vs targets {targets.shape}")
    keep = targets != ignore_index
    bad = targets[keep & ((targets < 0) | (targets >= vocab))]
    if bad.size:
        raise IndexError(f"target id {int(bad[0])} outside vocabulary of size {vocab}")
    count = int(keep.sum())
    if count == 0:
        raise DegenerateInputError("every target position is ignored")

    logp = _stable_log_softmax(logits.data, -1)
    safe = np.where(keep, targets, 0)
    picked = np.take_along_axis(logp, safe[..., None], axis=-1)[..., 0]
    total = -(picked * keep).sum()
    denom = count if reduction == "mean" else 1

    def back(g):
        grad = np.exp(logp)
        np.put_along_axis(grad, safe[..., None],
                          np.take_along_axis(grad, safe[..., None], axis=-1) - 1.0, axis=-1)
        return (grad * keep[..., None] * (g / denom),)

    return _result(np.asarray(total / denom, dtype=DTYPE), (logits,), back)
