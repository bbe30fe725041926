"""
Adam with an inverse-time learning-rate schedule.

effective_lr(t) = base_lr / (1 + decay * t), t = number of steps already taken.
Moments are bias-corrected; beta1/beta2/eps default to 0.9 / 0.999 / 1e-8.
"""
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .errors import ContractError


@dataclass
class AdamState:
    m: List[np.ndarray]
    v: List[np.ndarray]
    t: int = 0
    base_lr: float = 0.005
    decay: float = 0.0001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.0

    @property
    def effective_lr(self) -> float:
        return self.base_lr / (1.0 + self.decay * self.t)

    def copy(self) -> "AdamState":
        return AdamState([m.copy() for m in self.m], [v.copy() for v in self.v], self.t,
                         self.base_lr, self.decay, self.beta1, self.beta2, self.eps,
                         self.weight_decay)


def init_adam(params, base_lr=0.005, decay=0.0001, beta1=0.9, beta2=0.999, eps=1e-8,
              weight_decay=0.0) -> AdamState:
    return AdamState(m=[np.zeros_like(p.data) for p in params],
                     v=[np.zeros_like(p.data) for p in params],
                     base_lr=base_lr, decay=decay, beta1=beta1, beta2=beta2, eps=eps,
                     weight_decay=weight_decay)


def adam_step(params, grads, state: AdamState):
    """One Adam update. ``grads`` entries may be None (treated as zero).

    Parameter arrays are replaced, not written into, so earlier snapshots of
    ``p.data`` stay valid. Returns (params, state).
    """
    if not (len(params) == len(grads) == len(state.m) == len(state.v)):
        raise ContractError(f"adam_step: {len(params)} params, {len(grads)} grads, "
                            f"{len(state.m)} moment slots")
    lr = state.effective_lr
    state.t += 1
    c1 = 1.0 - state.beta1 ** state.t
    c2 = 1.0 - state.beta2 ** state.t
    for i, (p, g) in enumerate(zip(params, grads)):
        if g is None:
            g = np.zeros_like(p.data)
        elif g.shape != p.data.shape:
            raise ContractError(f"adam_step: grad {g.shape} does not match param {p.data.shape}")
        if state.weight_decay:
            g = g + state.weight_decay * p.data
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g
        m_hat = state.m[i] / c1
        v_hat = state.v[i] / c2
        p.data = p.data - lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return params, state


def clip_global_norm(grads, max_norm):
    """Rescale grads so their joint L2 norm is at most max_norm.

    Returns (clipped grads, norm before clipping).
    """
    norm = float(np.sqrt(np.sum([np.sum(g * g) for g in grads if g is not None])))
    if max_norm is None or max_norm <= 0 or norm <= max_norm:
        return grads, norm
    factor = max_norm / (norm + 1e-12)
    return [None if g is None else g * factor for g in grads], norm
