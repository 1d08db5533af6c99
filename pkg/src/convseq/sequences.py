"""The known sequence b: finite vectors, catalog kernels and self-recurrent kernels."""

from __future__ import annotations

import cmath
import math
import threading
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Sequence

from .errors import ConstructionError, DomainError, ParamError, UnknownCatalogEntry
from .numeric import Coefficient, from_json, to_coeff, to_json

__all__ = [
    "SequenceSpec",
    "FiniteSpec",
    "ClosedFormSpec",
    "SelfRecurrentSpec",
    "TableSpec",
    "eval_b",
    "mobius",
    "catalog_b",
    "catalog_names",
    "partial_b_sum",
    "spec_from_json",
    "SUMS_TO_ONE",
]


class SequenceSpec:
    """Base class for a description of b.

    Subclasses implement ``_compute(n)``. Values are memoised under a lock, so a
    spec can be shared between threads once constructed.
    """

    kind = "abstract"
    support: int | None = None  # number of stored terms for finite specs

    def __init__(self, name: str | None = None, params: dict | None = None):
        self.name = name
        self.params = dict(params or {})
        self._cache: list[Coefficient] = []
        self._lock = threading.RLock()
        if self(0) == 0:
            raise ConstructionError("b0 must be nonzero")

    def _compute(self, n: int) -> Coefficient:
        raise NotImplementedError

    def __call__(self, n: int) -> Coefficient:
        if n < 0:
            raise DomainError(f"index {n} < 0")
        cache = self._cache
        if n < len(cache):
            return cache[n]
        with self._lock:
            # terms are produced in increasing order so self-recurrent kinds
            # can read their own prefix
            while len(cache) <= n:
                cache.append(to_coeff(self._compute(len(cache))))
            return cache[n]

    def terms(self, N: int) -> list[Coefficient]:
        """b_0..b_N."""
        self(N)
        return list(self._cache[: N + 1])

    @property
    def is_finite(self) -> bool:
        return self.support is not None

    def to_json(self) -> dict:
        if self.name is None:
            raise NotImplementedError
        return {"kind": "catalog", "name": self.name, "params": _params_to_json(self.params)}

    def __repr__(self):
        if self.name:
            return f"{type(self).__name__}({self.name!r}, {self.params!r})"
        return f"{type(self).__name__}()"


class FiniteSpec(SequenceSpec):
    """b_0..b_{L-1} followed by an exact zero tail."""

    kind = "finite"

    def __init__(self, values: Sequence, name: str | None = None, params: dict | None = None):
        values = [to_coeff(v) for v in values]
        if not values:
            raise ConstructionError("b0 must be nonzero (empty sequence)")
        # trailing zeros carry no information
        while len(values) > 1 and values[-1] == 0:
            values.pop()
        self.values = values
        self.support = len(values)
        super().__init__(name, params)

    def _compute(self, n):
        return self.values[n] if n < len(self.values) else Fraction(0)

    def to_json(self):
        if self.name is not None:
            return super().to_json()
        return {"kind": "finite", "values": [to_json(v) for v in self.values]}

    def __repr__(self):
        return f"FiniteSpec({[str(v) for v in self.values]})"


class ClosedFormSpec(SequenceSpec):
    kind = "catalog"

    def __init__(self, fn: Callable[[int], Coefficient], name: str, params: dict | None = None):
        self._fn = fn
        super().__init__(name, params)

    def _compute(self, n):
        return self._fn(n)


class SelfRecurrentSpec(SequenceSpec):
    """b_n for n >= len(seeds) is ``step(n, [b_0..b_{n-1}])``."""

    kind = "self_recurrent"

    def __init__(self, seeds: Sequence, step: Callable, name: str | None = None, params: dict | None = None):
        self.seeds = [to_coeff(s) for s in seeds]
        self._step = step
        super().__init__(name, params)

    def _compute(self, n):
        if n < len(self.seeds):
            return self.seeds[n]
        return self._step(n, self._cache)


class TableSpec(SequenceSpec):
    """A hard-coded prefix. Indices past the table are not known and raise."""

    kind = "catalog"

    def __init__(self, values: Sequence, name: str, params: dict | None = None):
        self.values = [to_coeff(v) for v in values]
        super().__init__(name, params)

    def _compute(self, n):
        if n >= len(self.values):
            raise DomainError(
                f"{self.name}: only {len(self.values)} tabulated terms, b_{n} requested"
            )
        return self.values[n]


def eval_b(spec: SequenceSpec, n: int) -> Coefficient:
    return spec(n)


def partial_b_sum(spec: SequenceSpec, N: int) -> Coefficient:
    """b_0 + ... + b_N."""
    if N < 0:
        raise DomainError("N must be >= 0")
    terms = spec.terms(N)
    total = sum(terms[1:], terms[0])
    return total


def mobius(n: int) -> int:
    """Möbius function by trial division."""
    if n < 1:
        raise DomainError(f"mobius undefined for n={n}")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1 if p == 2 else 2
    if n > 1:
        result = -result
    return result


# -- helpers for the catalog ------------------------------------------------


@lru_cache(maxsize=None)
def _fib_pair(n: int) -> tuple[int, int]:
    """(F(n), F(n+1)) by fast doubling."""
    if n == 0:
        return 0, 1
    a, b = _fib_pair(n >> 1)
    c = a * (2 * b - a)
    d = a * a + b * b
    return (d, c + d) if n & 1 else (c, d)


def fibonacci(n: int) -> int:
    return _fib_pair(n)[0]


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def _exponent(params: dict, entry: str) -> Coefficient:
    if "a" not in params:
        raise ParamError(f"{entry} needs parameter 'a'")
    a = to_coeff(params["a"])
    # integer-valued complex input still means the float path; only exact
    # rationals with denominator 1 give exact terms
    return a


def _inv_pow(j: int, a: Coefficient) -> Coefficient:
    """j**(-a) with the principal branch; exact for integer exponents."""
    if isinstance(a, Fraction) and a.denominator == 1:
        e = a.numerator
        return Fraction(1, j**e) if e >= 0 else Fraction(j ** (-e))
    a = complex(a)
    return cmath.exp(-a * math.log(j))


def _reciprocal_kernel(kernel: Callable[[int], Coefficient], name: str, params: dict) -> SelfRecurrentSpec:
    """b with B(s) = (1 - s)/K(s) + s for a kernel series K, K_0 = 1.

    Then b_0 = 1 and b_n = [n >= 2] K_{n-1} - sum_{l<n} b_l K_{n-l}, and the
    alpha_0 sequence for m = 1 is the partial sums of K.
    """
    ks: list[Coefficient] = []

    def K(n):
        while len(ks) <= n:
            ks.append(to_coeff(kernel(len(ks))))
        return ks[n]

    if K(0) != 1:
        raise ConstructionError(f"{name}: kernel must start with 1")

    def step(n, prev):
        acc = K(n - 1) if n >= 2 else Fraction(0)
        for l in range(n):
            acc = acc - prev[l] * K(n - l)
        return acc

    return SelfRecurrentSpec([1], step, name=name, params=params)


def _hasse_term(k: int, a: Coefficient) -> Coefficient:
    """2^-k sum_j C(k, j) (-1)^j (j+1)^-a."""
    acc = Fraction(0)
    for j in range(k + 1):
        t = comb(k, j) * _inv_pow(j + 1, a)
        acc = acc - t if j & 1 else acc + t
    if isinstance(acc, Fraction):
        return acc / (1 << k)
    return acc / 2.0**k


# Gould, Ramanujan, Bell and Motzkin kernels: b = s + 1/A(s) where A is the
# target sequence (Gould's 2^popcount(n), Ramanujan's tau(n+1), Bell numbers,
# Motzkin numbers). The tables were produced by exact power-series inversion
# of the first 30 terms of A; b_n for n >= 2 matches OEIS A308986 (Gould),
# A006922 (Ramanujan), -A074664 (Bell), -A001006 shifted by two (Motzkin).
_TABLES = {
    6: [1, 0, -1, -2, -6, -22, -92, -426, -2146, -11624, -67146, -411142, -2656052,
        -18035178, -128318314, -954086192, -7396278762, -59659032142, -499778527628,
        -4341025729290, -39035256389026, -362878164902216, -3482882959111530,
        -34472032118214598, -351444606388445108, -3686834538319818762,
        -39758653019075650282, -440344396890899828912, -5004519228191621887722,
        -58316339964820461888526],
    10: [1, -1, 2, -4, 10, -20, 36, -72, 154, -308, 596, -1192, 2420, -4840, 9608,
         -19216, 38586, -77172, 154036, -308072, 616740, -1233480, 2465768, -4931536,
         9865492, -19730984, 39457128, -78914256, 157838120, -315676240],
    11: [1, 0, -1, -1, -2, -4, -9, -21, -51, -127, -323, -835, -2188, -5798, -15511,
         -41835, -113634, -310572, -853467, -2356779, -6536382, -18199284, -50852019,
         -142547559, -400763223, -1129760415, -3192727797, -9043402501, -25669818476,
         -73007772802],
    13: [1, 25, 324, 3200, 25650, 176256, 1073720, 5930496, 30178575, 143184000,
         639249300, 2705114880, 10914317934, 42189811200, 156883829400, 563116739584,
         1956790259235, 6599620022400, 21651325216200, 69228721526400, 216108718571250,
         659641645039360, 1971466420726656, 5776331152550400, 16610409114771900,
         46925988716146176, 130362155499200220, 356418628326241024, 959788304511313500,
         2547447689037081600],
}

FAMOUS_NAMES = {
    1: "Lucas numbers (2a)",
    2: "Woodall numbers",
    3: "Lazy Caterer's sequence",
    4: "shifted Pell numbers",
    5: "natural numbers",
    6: "Bell numbers",
    7: "Catalan numbers",
    8: "shifted Fine numbers",
    9: "Les Marvin's sequence",
    10: "Gould's sequence",
    11: "Motzkin numbers",
    12: "Padovan numbers",
    13: "Ramanujan tau numbers",
    14: "powers k^n",
    15: "(k+1)-step Fibonacci numbers",
}


def _int_param(params, key, lo):
    if key not in params:
        raise ParamError(f"missing parameter {key!r}")
    v = params[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < lo:
        raise ParamError(f"parameter {key!r} must be an integer >= {lo}, got {v!r}")
    return v


def _famous(params: dict) -> SequenceSpec:
    ident = _int_param(params, "id", 1)
    src = {"name": "famous", "params": params}
    if ident == 1:
        def lucas(n):
            if n == 0:
                return Fraction(1)
            if n == 1:
                return Fraction(1, 2)
            return Fraction(-5, 1 << n)
        return ClosedFormSpec(lucas, **src)
    if ident == 2:
        return SelfRecurrentSpec([1, -6, 26, -84], lambda n, b: -2 * b[n - 1] + 4 * b[n - 2], **src)
    if ident == 3:
        return SelfRecurrentSpec([1, -1, 0, 1], lambda n, b: -b[n - 3], **src)
    if ident == 4:
        return FiniteSpec([1, -1, -1], **src)
    if ident == 5:
        return FiniteSpec([1, -1, 1], **src)
    if ident in (7, 8):
        b1 = 0 if ident == 7 else 1
        return ClosedFormSpec(lambda n: 1 if n == 0 else b1 if n == 1 else -catalan(n - 1), **src)
    if ident == 9:
        return SelfRecurrentSpec([1, -1, 0, -1, 3], lambda n, b: b[n - 2] - b[n - 3], **src)
    if ident == 12:
        return ClosedFormSpec(lambda n: 1 if n < 2 else (0 if n % 2 == 0 else -1), **src)
    if ident == 14:
        k = _int_param(params, "k", 0)
        return FiniteSpec([1, 1 - k], **src)
    if ident == 15:
        k = _int_param(params, "k", 1)
        return FiniteSpec([1, 0] + [-1] * k, **src)
    if ident in _TABLES:
        return TableSpec(_TABLES[ident], **src)
    raise ParamError(f"famous id must be in 1..15, got {ident}")


_SQRT5 = math.sqrt(5.0)
_PHI = (1.0 + _SQRT5) / 2.0
_PSI = (1.0 - _SQRT5) / 2.0
_ARCSIN_SCALE = 3.0 * math.sqrt(3.0) / (2.0 * math.pi)


def _euler_identity(n: int) -> complex:
    if 2 * n <= 170:
        mag = math.pi ** (2 * n) / math.factorial(2 * n)
    else:
        mag = math.exp(2 * n * math.log(math.pi) - math.lgamma(2 * n + 1))
    sign = 1.0 if n % 2 else -1.0
    return sign * mag * complex(1.0, math.pi / (2 * n + 1))


def _arcsin_central(n: int) -> complex:
    # Gamma(n+1)^2 / Gamma(2n+2) = (n!)^2 / (2n+1)!, formed exactly
    ratio = Fraction(math.factorial(n) ** 2, math.factorial(2 * n + 1))
    return complex(_ARCSIN_SCALE * float(ratio))


def _fibonacci_phi(n: int) -> complex:
    # F(n+1) phi^-n via Binet, avoiding huge integers
    return complex((_PHI - _PSI * (_PSI / _PHI) ** n) / _SQRT5)


def _no_params(name, params):
    if params:
        raise ParamError(f"{name} takes no parameters, got {sorted(params)}")


def catalog_b(name: str, params: dict | None = None) -> SequenceSpec:
    """Build a named b-sequence.

    Zeta entries take ``a`` (exact integer -> exact terms, anything else ->
    complex floats); ``famous`` takes ``id`` in 1..15 and ``k`` for ids 14/15.
    """
    params = dict(params or {})
    if name == "zeta_direct":
        a = _exponent(params, name)
        return _reciprocal_kernel(lambda n: _inv_pow(n + 1, a), name, {"a": a})
    if name == "zeta_mobius":
        a = _exponent(params, name)
        return _reciprocal_kernel(lambda n: mobius(n + 1) * _inv_pow(n + 1, a), name, {"a": a})
    if name == "zeta_hasse":
        a = _exponent(params, name)
        return _reciprocal_kernel(lambda n: _hasse_term(n, a), name, {"a": a})
    if name == "leibniz_pi":
        _no_params(name, params)
        return _reciprocal_kernel(lambda n: Fraction((-1) ** n, 2 * n + 1), name, {})
    if name == "exp_e":
        _no_params(name, params)
        return _reciprocal_kernel(lambda n: Fraction(1, math.factorial(n)), name, {})
    if name == "euler_identity":
        _no_params(name, params)
        return ClosedFormSpec(_euler_identity, name, {})
    if name == "arcsin_central":
        _no_params(name, params)
        return ClosedFormSpec(_arcsin_central, name, {})
    if name == "fibonacci_geometric":
        _no_params(name, params)
        return ClosedFormSpec(lambda n: Fraction(fibonacci(n + 1), 1 << (n + 2)), name, {})
    if name == "catalan_prob":
        _no_params(name, params)
        return ClosedFormSpec(lambda n: Fraction(catalan(n), 1 << (2 * n + 1)), name, {})
    if name == "fibonacci_phi":
        _no_params(name, params)
        return ClosedFormSpec(_fibonacci_phi, name, {})
    if name == "sine":
        _no_params(name, params)
        return ClosedFormSpec(lambda n: complex(math.sin(n + 1)), name, {})
    if name == "famous":
        return _famous(params)
    raise UnknownCatalogEntry(f"unknown catalog entry {name!r}")


def catalog_names() -> list[str]:
    return [
        "zeta_direct", "zeta_mobius", "zeta_hasse", "leibniz_pi", "exp_e",
        "euler_identity", "arcsin_central", "fibonacci_geometric", "catalan_prob",
        "fibonacci_phi", "sine", "famous",
    ]


# Entries whose terms add up to one: (params, N, tol). Beyond N the partial
# sums keep approaching 1. catalan_prob's tail decays like N^-1/2, and the
# zeta entries at a=2 like N^-1 up to logs, so their tolerances are looser.
SUMS_TO_ONE = {
    "zeta_direct": ({"a": 3}, 400, 1e-4),
    "zeta_mobius": ({"a": 3}, 400, 1e-4),
    "zeta_hasse": ({"a": 2}, 200, 1e-6),
    "leibniz_pi": ({}, 400, 1e-3),
    "exp_e": ({}, 40, 1e-12),
    "fibonacci_geometric": ({}, 200, 1e-12),
    "catalan_prob": ({}, 2000, 2e-2),
    "euler_identity": ({}, 60, 1e-12),
    "arcsin_central": ({}, 60, 1e-12),
}


def _params_to_json(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        out[k] = to_json(v) if isinstance(v, (Fraction, complex, float)) else v
    return out


def spec_from_json(obj) -> SequenceSpec:
    """Parse the JSON spec form; a bare list is shorthand for a finite spec."""
    if isinstance(obj, list):
        return FiniteSpec([from_json(v) for v in obj])
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParamError(f"bad sequence spec {obj!r}")
    kind = obj["kind"]
    if kind == "finite":
        if set(obj) != {"kind", "values"} or not isinstance(obj["values"], list):
            raise ParamError("finite spec needs exactly 'kind' and a 'values' list")
        return FiniteSpec([from_json(v) for v in obj["values"]])
    if kind == "catalog":
        extra = set(obj) - {"kind", "name", "params"}
        if extra or "name" not in obj:
            raise ParamError(f"catalog spec has bad keys {sorted(extra) or ['<missing name>']}")
        params = dict(obj.get("params") or {})
        if "a" in params:
            params["a"] = from_json(params["a"])
        return catalog_b(obj["name"], params)
    raise ParamError(f"unknown spec kind {kind!r}")
