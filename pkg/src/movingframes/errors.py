class FrameError(ValueError):
    """Base class for every error raised by this package."""

    #: error category used by the CLI to pick an exit status
    kind = "input"

    def record(self):
        return {"error": type(self).__name__, "kind": self.kind, "message": str(self)}


class DimensionMismatch(FrameError):
    pass


class BadShape(FrameError):
    pass


class NotParseval(FrameError):
    kind = "verification"

    def __init__(self, residual, where=None):
        self.residual = float(residual)
        self.where = where
        msg = f"frame is not Parseval (residual {self.residual:.3e})"
        if where is not None:
            msg += f" at {where}"
        super().__init__(msg)

    def record(self):
        rec = super().record()
        rec["residual"] = self.residual
        if self.where is not None:
            rec["where"] = self.where
        return rec


class RankDeficient(FrameError):
    kind = "numerical"


class SingularSeed(FrameError):
    """Gram-Schmidt met a numerically dependent row: the step left the local chart."""

    kind = "numerical"

    def __init__(self, message, index=None):
        self.index = index
        if index is not None:
            message = f"{message} (path index {index})"
        super().__init__(message)

    def record(self):
        rec = super().record()
        if self.index is not None:
            rec["index"] = self.index
        return rec


class NotIdempotent(FrameError):
    pass


class NotOrthonormal(FrameError):
    pass


class NotOnSphere(FrameError):
    pass


class OutOfDomain(FrameError):
    pass


class RankDeficientJacobian(FrameError):
    kind = "numerical"

    def __init__(self, point):
        self.point = tuple(float(c) for c in point)
        super().__init__(f"jacobian is rank deficient at parameter point {self.point}")

    def record(self):
        rec = super().record()
        rec["point"] = list(self.point)
        return rec


class MissingEdgeSamples(FrameError):
    pass


class NotClosed(FrameError):
    kind = "verification"
