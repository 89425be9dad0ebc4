"""Exact Laurent polynomials over the integers.

Coefficients are Python ints, so all arithmetic is exact.  Every polynomial
carries a variable tag ("A" for bracket computations, "q" for Jones-side
polynomials); mixing tags in arithmetic is an error, which catches pipeline
bugs where an un-substituted bracket leaks into a Jones-side identity.
"""

from __future__ import annotations

from typing import Iterable, Mapping


class LaurentPoly:
    """A Laurent polynomial ``sum c_e * var^e`` with integer coefficients.

    Internally a dict from exponent to coefficient; zero coefficients are
    never stored, so equality of dicts is equality of polynomials.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = (), var: str = "q"):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, int] = {}
        for e, c in items:
            if not isinstance(e, int) or not isinstance(c, int):
                raise TypeError("exponents and coefficients must be ints")
            if c:
                acc[e] = acc.get(e, 0) + c
                if not acc[e]:
                    del acc[e]
        self.coeffs = acc
        self.var = var

    @classmethod
    def zero(cls, var: str = "q") -> "LaurentPoly":
        return cls((), var)

    @classmethod
    def one(cls, var: str = "q") -> "LaurentPoly":
        return cls({0: 1}, var)

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1, var: str = "q") -> "LaurentPoly":
        return cls({exponent: coeff}, var)

    def _check_var(self, other: "LaurentPoly") -> None:
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({0: other}, self.var)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.var, frozenset(self.coeffs.items())))

    def __add__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly({0: other}, self.var)
        self._check_var(other)
        acc = dict(self.coeffs)
        for e, c in other.coeffs.items():
            v = acc.get(e, 0) + c
            if v:
                acc[e] = v
            elif e in acc:
                del acc[e]
        out = LaurentPoly.zero(self.var)
        out.coeffs = acc
        return out

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly.zero(self.var)
        out.coeffs = {e: -c for e, c in self.coeffs.items()}
        return out

    def __sub__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly({0: other}, self.var)
        return self + (-other)

    def __rsub__(self, other: int) -> "LaurentPoly":
        return LaurentPoly({0: other}, self.var) - self

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            out = LaurentPoly.zero(self.var)
            if other:
                out.coeffs = {e: c * other for e, c in self.coeffs.items()}
            return out
        self._check_var(other)
        acc: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                v = acc.get(e, 0) + c1 * c2
                if v:
                    acc[e] = v
                elif e in acc:
                    del acc[e]
        out = LaurentPoly.zero(self.var)
        out.coeffs = acc
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers of polynomials are not defined")
        out = LaurentPoly.one(self.var)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shifted(self, k: int) -> "LaurentPoly":
        """Multiply by var**k."""
        out = LaurentPoly.zero(self.var)
        out.coeffs = {e + k: c for e, c in self.coeffs.items()}
        return out

    def min_degree(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return min(self.coeffs)

    def max_degree(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return max(self.coeffs)

    def evaluate(self, value: int) -> int:
        """Evaluate at an integer (value must be +-1 when negative exponents occur)."""
        total = 0
        for e, c in self.coeffs.items():
            if e >= 0:
                total += c * value ** e
            else:
                if value not in (1, -1):
                    raise ValueError("negative exponents need a unit evaluation point")
                total += c * value ** (-e)
        return total

    def to_json_dict(self) -> dict:
        return {
            "variable": self.var,
            "coefficients": {str(e): self.coeffs[e] for e in sorted(self.coeffs)},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "LaurentPoly":
        return cls({int(e): int(c) for e, c in data["coefficients"].items()}, data["variable"])

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            if e == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                power = self.var if e == 1 else f"{self.var}^{e}"
                term = f"{mag}{power}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.coeffs!r}, var={self.var!r})"
