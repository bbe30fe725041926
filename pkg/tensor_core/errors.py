class ShapeError(ValueError):
    pass


class DegenerateInputError(ValueError):
    """Input is well-typed but leaves nothing to compute (all ignored, empty, fully masked)."""


class ContractError(ValueError):
    pass
