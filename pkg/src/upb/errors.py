"""Exception types raised across the package."""

from __future__ import annotations


class UPBError(Exception):
    """Base class for domain errors (CLI maps these to exit code 1)."""


class RaggedBasis(UPBError, ValueError):
    pass


class DuplicateState(UPBError, ValueError):
    pass


class KetSyntaxError(UPBError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DecodeError(UPBError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class InvalidGraph(UPBError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid graph")


class NotAUPB(UPBError):
    def __init__(self, which: str, verdict=None):
        super().__init__(f"input {which} is not a UPB" + (f" ({verdict.kind.value})" if verdict else ""))
        self.which = which
        self.verdict = verdict


class DimensionMismatch(UPBError, ValueError):
    pass


class MixedDimensions(UPBError, ValueError):
    pass


class VersionMismatch(UPBError, ValueError):
    pass


class NotSplittable(UPBError, ValueError):
    def __init__(self, qubit: int, component):
        super().__init__(f"qubit {qubit} is not splittable: offending component {component}")
        self.qubit = qubit
        self.component = component


class OddOrder(UPBError, ValueError):
    pass


class Unsupported(UPBError):
    def __init__(self, p: int, s: int):
        super().__init__(f"no construction route for p={p}, s={s}")
        self.p = p
        self.s = s


class BadArguments(UPBError, ValueError):
    pass


class DegenerateSample(UPBError):
    pass


class Interrupted(UPBError):
    def __init__(self, resume_token):
        super().__init__(f"search interrupted; resume with {resume_token}")
        self.resume_token = resume_token
