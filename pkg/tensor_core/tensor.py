"""
Dense float64 tensor with a reverse-mode tape.

Values live in a row-major numpy array. Operations in tensor_core.ops record
themselves on the active Tape when at least one input requires a gradient;
backward() then replays the tape once, last record first.
"""
import threading
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import ContractError

DTYPE = np.float64

_local = threading.local()


def _stack():
    if not hasattr(_local, "tapes"):
        _local.tapes = []
    return _local.tapes


def active_tape():
    tapes = _stack()
    return tapes[-1] if tapes else None


class Tensor:
    def __init__(self, data, requires_grad=False):
        self.data = np.array(data, dtype=DTYPE)
        self.requires_grad = bool(requires_grad)
        self.grad: Optional[np.ndarray] = None

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    @property
    def values(self) -> np.ndarray:
        """Flat row-major view of the data."""
        return self.data.reshape(-1)

    def numpy(self) -> np.ndarray:
        return self.data

    def item(self) -> float:
        if self.data.size != 1:
            raise ContractError(f"item() needs a single value, shape is {self.shape}")
        return float(self.data.reshape(-1)[0])

    def zero_grad(self):
        self.grad = None

    def detach(self) -> "Tensor":
        return Tensor(self.data.copy())

    def __repr__(self):
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    # operator sugar, implemented in ops
    def __add__(self, other):
        from . import ops
        return ops.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        from . import ops
        return ops.sub(self, other)

    def __rsub__(self, other):
        from . import ops
        return ops.sub(as_tensor(other), self)

    def __mul__(self, other):
        from . import ops
        return ops.mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        from . import ops
        return ops.scale(self, -1.0)

    def __matmul__(self, other):
        from . import ops
        return ops.matmul(self, other)

    def __getitem__(self, index):
        from . import ops
        return ops.getitem(self, index)


def as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


@dataclass
class Record:
    inputs: Tuple[Tensor, ...]
    output: Tensor
    backward: Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


class Tape:
    """Ordered list of recorded operations.

    Used as a context manager; operations executed inside the ``with`` block
    are appended in creation order, which is already a topological order.
    Tapes are per thread.
    """

    def __init__(self):
        self.records = []

    def record(self, inputs, output, backward):
        self.records.append(Record(tuple(inputs), output, backward))

    def clear(self):
        self.records = []

    def __len__(self):
        return len(self.records)

    def __enter__(self):
        _stack().append(self)
        return self

    def __exit__(self, exc_type, exc, tb):
        _stack().remove(self)
        return False


def backward(loss: Tensor, tape: Tape):
    """Fill ``.grad`` of every requires_grad tensor reachable from ``loss``.

    Gradients add up across fan-out and across repeated calls; clear them
    with zero_grad() between optimizer steps.
    """
    if loss.data.size != 1:
        raise ContractError(f"backward needs a scalar loss, got shape {loss.shape}")
    if not any(rec.output is loss for rec in tape.records):
        raise ContractError("loss was not produced on this tape")

    pending = {id(loss): np.ones_like(loss.data)}
    leaves = {}
    for rec in reversed(tape.records):
        g = pending.pop(id(rec.output), None)
        if g is None:
            continue
        rec.output.grad = g if rec.output.grad is None else rec.output.grad + g
        in_grads = rec.backward(g)
        for t, gi in zip(rec.inputs, in_grads):
            if gi is None or not t.requires_grad:
                continue
            key = id(t)
            pending[key] = gi if key not in pending else pending[key] + gi
            leaves[key] = t

    for key, g in pending.items():
        t = leaves[key]
        t.grad = g if t.grad is None else t.grad + g
