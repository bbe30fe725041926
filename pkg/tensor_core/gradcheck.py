import numpy as np

from .tensor import Tape, backward


def analytic_grads(loss_fn, inputs):
    for t in inputs:
        t.requires_grad = True
        t.zero_grad()
    with Tape() as tape:
        loss = loss_fn(*inputs)
    backward(loss, tape)
    return [np.zeros_like(t.data) if t.grad is None else t.grad.copy() for t in inputs]


def numeric_grad(loss_fn, inputs, target, eps=1e-4, coords=None):
    """Central differences of loss_fn w.r.t. ``inputs[target]``.

    ``coords`` restricts the differences to selected flat indices (others stay 0).
    """
    t = inputs[target]
    flat = t.data.reshape(-1)
    grad = np.zeros_like(flat)
    visit = range(flat.size) if coords is None else coords
    for i in visit:
        orig = flat[i]
        flat[i] = orig + eps
        up = loss_fn(*inputs).item()
        flat[i] = orig - eps
        down = loss_fn(*inputs).item()
        flat[i] = orig
        grad[i] = (up - down) / (2 * eps)
    return grad.reshape(t.shape)


def relative_error(a, b, floor=1e-6):
    """||a - b|| / (||a|| + ||b||), with the denominator held at or above ``floor``.

    A zero analytic gradient against finite-difference round-off scores near 0, not 1.
    """
    a, b = np.ravel(a), np.ravel(b)
    denom = max(np.linalg.norm(a) + np.linalg.norm(b), floor)
    return float(np.linalg.norm(a - b) / denom)


def check_gradients(loss_fn, inputs, eps=1e-4, coords=None):
    """Largest relative error between tape and finite-difference gradients over ``inputs``.

    ``coords`` optionally maps input position -> flat indices to check.
    """
    analytic = analytic_grads(loss_fn, inputs)
    for t in inputs:
        t.requires_grad = False
    worst = 0.0
    for k, g in enumerate(analytic):
        sel = None if coords is None else coords.get(k)
        num = numeric_grad(loss_fn, inputs, k, eps=eps, coords=sel)
        if sel is not None:
            mask = np.zeros(g.size, dtype=bool)
            mask[list(sel)] = True
            g = np.where(mask.reshape(g.shape), g, 0.0)
        worst = max(worst, relative_error(g, num))
    return worst
