class NonFiniteLossError(RuntimeError):
    def __init__(self, epoch, batch_index, value, ids=()):
        self.epoch = epoch
        self.batch_index = batch_index
        self.value = value
        shown = ", ".join(str(i) for i in list(ids)[:5])
        super().__init__(f"non-finite loss {value} at epoch {epoch}, batch {batch_index} "
                         f"(playlists {shown}{', ...' if len(ids) > 5 else ''})")


class CheckpointError(Exception):
    pass


class CheckpointCorruptError(CheckpointError):
    pass


class CheckpointTruncatedError(CheckpointError):
    pass


class CheckpointVersionError(CheckpointError):
    pass
