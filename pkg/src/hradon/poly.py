"""Bivariate polynomials with exact or floating coefficients.

Coefficients parsed from integer or rational literals are stored as
``fractions.Fraction``; decimal literals become floats.  Support, parity and
hull decisions therefore never depend on rounding.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

Number = Fraction | float


def _normalize(c) -> Number:
    if isinstance(c, bool):
        raise TypeError("boolean coefficient")
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, Real):
        c = float(c)
        if not math.isfinite(c):
            raise ValueError(f"non-finite coefficient {c!r}")
        return c
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class UPoly:
    """Univariate polynomial stored as a sparse degree -> coefficient map."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, Number] | None = None):
        c = {}
        for d, v in (coeffs or {}).items():
            if d < 0:
                raise ValueError("negative degree")
            v = _normalize(v)
            if v != 0:
                c[int(d)] = v
        self._c = MappingProxyType(dict(sorted(c.items())))

    @property
    def coeffs(self) -> Mapping[int, Number]:
        return self._c

    def is_zero(self) -> bool:
        return not self._c

    @property
    def degree(self) -> int:
        return max(self._c) if self._c else -1

    @property
    def lowest_degree(self) -> int:
        return min(self._c) if self._c else -1

    def __getitem__(self, d: int) -> Number:
        return self._c.get(d, Fraction(0))

    def __call__(self, x):
        if not self._c:
            return 0.0 * np.asarray(x, dtype=float) if np.ndim(x) else 0.0
        arr = self.dense_float()
        out = 0.0
        for a in arr[::-1]:
            out = out * x + a
        return out

    def dense_float(self) -> np.ndarray:
        """Coefficients a_0..a_deg as floats (increasing degree)."""
        out = np.zeros(max(self.degree, 0) + 1)
        for d, v in self._c.items():
            out[d] = float(v)
        return out

    def derivative(self, n: int = 1) -> "UPoly":
        c = {}
        for d, v in self._c.items():
            if d >= n:
                c[d - n] = v * math.perm(d, n)
        return UPoly(c)

    def roots(self) -> np.ndarray:
        """Complex roots with multiplicity (numpy companion matrix)."""
        if self.degree <= 0:
            return np.zeros(0, dtype=complex)
        low = self.lowest_degree
        dense = self.dense_float()[low:]
        nz = np.roots(dense[::-1]) if len(dense) > 1 else np.zeros(0, dtype=complex)
        return np.concatenate([np.zeros(low, dtype=complex), nz.astype(complex)])

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return dict(self._c) == dict(other._c)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._c.items()))

    def __repr__(self) -> str:
        return f"UPoly({dict(self._c)!r})"


class Polynomial2:
    """Polynomial in (s, t) with no stored zero coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[tuple[int, int], Number] | None = None):
        c = {}
        for key, v in (coeffs or {}).items():
            p, q = key
            if int(p) != p or int(q) != q:
                raise ValueError(f"non-integer exponent {key!r}")
            if p < 0 or q < 0:
                raise ValueError(f"negative exponent {key!r}")
            v = _normalize(v)
            if v != 0:
                c[(int(p), int(q))] = v
        self._c = MappingProxyType(dict(sorted(c.items())))

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int, Number]]) -> "Polynomial2":
        acc: dict[tuple[int, int], Number] = {}
        for p, q, c in terms:
            c = _normalize(c)
            key = (p, q)
            acc[key] = acc[key] + c if key in acc else c
        return cls(acc)

    @property
    def coeffs(self) -> Mapping[tuple[int, int], Number]:
        return self._c

    def support(self) -> frozenset[tuple[int, int]]:
        return frozenset(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def coeff(self, p: int, q: int) -> Number:
        return self._c.get((p, q), Fraction(0))

    def items(self):
        return self._c.items()

    @property
    def degree(self) -> int:
        return max((p + q for p, q in self._c), default=-1)

    @property
    def deg_s(self) -> int:
        return max((p for p, _ in self._c), default=-1)

    @property
    def deg_t(self) -> int:
        return max((q for _, q in self._c), default=-1)

    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self._c.values())

    def __call__(self, s, t):
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        out = np.zeros(np.broadcast(s, t).shape)
        for (p, q), c in self._c.items():
            out = out + float(c) * s**p * t**q
        return out if out.ndim else float(out)

    def scaled(self, factor) -> "Polynomial2":
        factor = _normalize(factor)
        return Polynomial2({k: v * factor for k, v in self._c.items()})

    def without(self, keys: Iterable[tuple[int, int]]) -> "Polynomial2":
        drop = set(keys)
        return Polynomial2({k: v for k, v in self._c.items() if k not in drop})

    def __add__(self, other: "Polynomial2") -> "Polynomial2":
        acc = dict(self._c)
        for k, v in other._c.items():
            acc[k] = acc[k] + v if k in acc else v
        return Polynomial2(acc)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial2):
            return dict(self._c) == dict(other._c)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._c.items()))

    def to_triples(self) -> list[list]:
        return [[p, q, _json_number(c)] for (p, q), c in self._c.items()]

    def to_text(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for (p, q), c in self._c.items():
            mono = [str(c)]
            if p:
                mono.append("s" if p == 1 else f"s^{p}")
            if q:
                mono.append("t" if q == 1 else f"t^{q}")
            parts.append("*".join(mono))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Polynomial2({self.to_text()})"

    def affine_split(self, var: str):
        """Return (g, h) with P = v*g(w) + h(w) if P is affine in ``var``.

        ``var`` is "s" or "t"; g, h are UPoly in the other variable.  Returns
        None when some monomial has degree >= 2 in ``var``.
        """
        idx = 0 if var == "s" else 1
        g: dict[int, Number] = {}
        h: dict[int, Number] = {}
        for key, c in self._c.items():
            e, other = key[idx], key[1 - idx]
            if e >= 2:
                return None
            (g if e == 1 else h)[other] = c
        return UPoly(g), UPoly(h)


def _json_number(c: Number):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else str(c)
    return c


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?(?:/\d+)?)
  | (?P<var>[st])
  | (?P<pow>\^|\*\*)
  | (?P<mul>\*)
  | (?P<sign>[+-])
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


class PolynomialSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _parse_number(text: str, pos: int) -> Number:
    try:
        return _number(text, pos)
    except ValueError as exc:
        if isinstance(exc, PolynomialSyntaxError):
            raise
        raise PolynomialSyntaxError(f"bad number {text!r}", pos) from None


def _number(text: str, pos: int) -> Number:
    if "/" in text:
        num, den = text.split("/")
        if any(ch in num for ch in ".eE"):
            raise PolynomialSyntaxError("rational literal needs an integer numerator", pos)
        if int(den) == 0:
            raise PolynomialSyntaxError("zero denominator", pos)
        return Fraction(int(num), int(den))
    if any(ch in text for ch in ".eE"):
        v = float(text)
        if not math.isfinite(v):
            raise PolynomialSyntaxError("non-finite coefficient", pos)
        return v
    return Fraction(int(text))


def _tokenize(text: str):
    toks = []
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise PolynomialSyntaxError(f"unexpected character {m.group()!r}", m.start())
        toks.append((kind, m.group(), m.start()))
    return toks


def _parse_monomials(text: str) -> Polynomial2:
    toks = _tokenize(text)
    if not toks:
        raise PolynomialSyntaxError("empty polynomial", 0)
    terms = []
    i = 0
    n = len(toks)
    first = True
    while i < n:
        sign = 1
        if toks[i][0] == "sign":
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise PolynomialSyntaxError("expected '+' or '-'", toks[i][2])
        first = False
        coef: Number = Fraction(1)
        exps = [0, 0]
        nfactors = 0
        while i < n and toks[i][0] != "sign":
            kind, val, pos = toks[i]
            if kind == "mul":
                if nfactors == 0 or i + 1 >= n or toks[i + 1][0] in ("sign", "mul"):
                    raise PolynomialSyntaxError("misplaced '*'", pos)
                i += 1
                continue
            if kind == "num":
                coef = coef * _parse_number(val, pos)
                i += 1
            elif kind == "var":
                e = 1
                i += 1
                if i < n and toks[i][0] == "pow":
                    i += 1
                    esign = 1
                    if i < n and toks[i][0] == "sign":
                        esign = -1 if toks[i][1] == "-" else 1
                        i += 1
                    if i >= n or toks[i][0] != "num" or not toks[i][1].isdigit():
                        p = toks[i][2] if i < n else len(text)
                        raise PolynomialSyntaxError("exponent must be an integer", p)
                    e = esign * int(toks[i][1])
                    if e < 0:
                        raise PolynomialSyntaxError("negative exponent", toks[i][2])
                    i += 1
                exps[0 if val == "s" else 1] += e
            else:
                raise PolynomialSyntaxError(f"unexpected {val!r}", pos)
            nfactors += 1
        if nfactors == 0:
            pos = toks[i][2] if i < n else len(text)
            raise PolynomialSyntaxError("empty term", pos)
        terms.append((exps[0], exps[1], sign * coef))
    return Polynomial2.from_terms(terms)


def _parse_triples(text: str) -> Polynomial2:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolynomialSyntaxError(f"invalid JSON ({exc.msg})", exc.pos) from None
    if not isinstance(data, list):
        raise PolynomialSyntaxError("JSON input must be a list of [p, q, c] triples", 0)
    terms = []
    for idx, item in enumerate(data):
        if not (isinstance(item, list) and len(item) == 3):
            raise PolynomialSyntaxError(f"item {idx} is not a [p, q, c] triple", 0)
        p, q, c = item
        if not all(isinstance(e, int) and not isinstance(e, bool) for e in (p, q)):
            raise PolynomialSyntaxError(f"item {idx}: exponents must be integers", 0)
        if p < 0 or q < 0:
            raise PolynomialSyntaxError(f"item {idx}: negative exponent", 0)
        if isinstance(c, str):
            c = _parse_number(c.strip(), 0)
        elif isinstance(c, bool) or not isinstance(c, (int, float)):
            raise PolynomialSyntaxError(f"item {idx}: coefficient must be a number", 0)
        elif isinstance(c, float) and not math.isfinite(c):
            raise PolynomialSyntaxError(f"item {idx}: non-finite coefficient", 0)
        terms.append((p, q, c))
    return Polynomial2.from_terms(terms)


def parse_polynomial(text: str) -> Polynomial2:
    """Parse ``c s^p t^q`` monomial text or a JSON list of [p, q, c] triples."""
    if not isinstance(text, str):
        raise TypeError("polynomial text must be a string")
    stripped = text.strip()
    if stripped.startswith("["):
        return _parse_triples(stripped)
    return _parse_monomials(text)


@dataclass(frozen=True)
class SliceDecomposition:
    """P(s, u) = phi(s) + psi0(u) + sum_p psi[p](u) s^p, u standing for y - t."""

    phi: UPoly
    psi0: UPoly
    psi: Mapping[int, UPoly] = field(default_factory=dict)
    p0: int = 1

    def active(self) -> list[int]:
        """Indices p >= 1 with psi_p not identically zero."""
        return sorted(p for p, v in self.psi.items() if not v.is_zero())

    def recombine(self) -> Polynomial2:
        acc: dict[tuple[int, int], Number] = {}
        for p, c in self.phi.coeffs.items():
            acc[(p, 0)] = c
        for q, c in self.psi0.coeffs.items():
            acc[(0, q)] = c
        for p, poly in self.psi.items():
            for q, c in poly.coeffs.items():
                acc[(p, q)] = c
        return Polynomial2(acc)


def slice_decomposition(P: Polynomial2, p0: int) -> SliceDecomposition:
    """Group P by powers of s.

    A pure linear term in the second variable (present only before the
    automorphism reduction) is kept inside psi0 so recombination stays exact.
    """
    if p0 < 1:
        raise ValueError("p0 must be a positive integer")
    if P.coeff(0, 0) != 0:
        raise ValueError("polynomial has a nonzero constant term")
    phi: dict[int, Number] = {}
    psi0: dict[int, Number] = {}
    psi: dict[int, dict[int, Number]] = {}
    for (p, q), c in P.items():
        if q == 0:
            phi[p] = c
        elif p == 0:
            psi0[q] = c
        else:
            psi.setdefault(p, {})[q] = c
    return SliceDecomposition(
        phi=UPoly(phi),
        psi0=UPoly(psi0),
        psi=MappingProxyType({p: UPoly(v) for p, v in sorted(psi.items())}),
        p0=p0,
    )


def apply_automorphism_reduction(P: Polynomial2, p0: int) -> Polynomial2:
    """Drop the pure s^p0 term and the pure linear t term."""
    if p0 < 1:
        raise ValueError("p0 must be a positive integer")
    return P.without([(p0, 0), (0, 1)])


def extract_Pp0(P: Polynomial2, p0: int) -> Polynomial2:
    """Terms s^p t^q with p < p0, q >= 1, plus pure s terms with p >= 1."""
    if p0 < 1:
        raise ValueError("p0 must be a positive integer")
    keep = {}
    for (p, q), c in P.items():
        if (q >= 1 and p < p0) or (q == 0 and p >= 1):
            keep[(p, q)] = c
    return Polynomial2(keep)


def sample_coefficients(support: Iterable[tuple[int, int]], rng: np.random.Generator,
                        mode: str = "uniform") -> Polynomial2:
    """Random member of the coefficient space on a fixed support.

    ``uniform`` draws from [-1, 1]; ``scale`` draws +-10^e with integer
    e in [-6, 6].  Zero draws are resampled so the support is exact.
    """
    coeffs = {}
    for key in sorted(set(support)):
        while True:
            if mode == "uniform":
                c = float(rng.uniform(-1.0, 1.0))
            elif mode == "scale":
                c = float(rng.choice([-1.0, 1.0]) * 10.0 ** int(rng.integers(-6, 7)))
            else:
                raise ValueError(f"unknown sampling mode {mode!r}")
            if c != 0.0:
                break
        coeffs[key] = c
    return Polynomial2(coeffs)
