"""Shared error types for resource caps and identity failures."""

from __future__ import annotations


DEFAULT_STATE_CAP = 2**24


class CapExceeded(RuntimeError):
    """A state-space enumeration would exceed the configured cap."""

    def __init__(self, required: int, cap: int, what: str):
        self.required = required
        self.cap = cap
        self.what = what
        super().__init__(f"{what} needs {required} states, cap is {cap}")


class IdentityError(AssertionError):
    """A structural identity failed; carries a witness description."""

    def __init__(self, identity: str, witness: str):
        self.identity = identity
        self.witness = witness
        super().__init__(f"{identity} failed: {witness}")
