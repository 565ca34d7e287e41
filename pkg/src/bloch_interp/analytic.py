"""Analytic functions on the unit disk as small construction trees.

Every node evaluates its value and its exact complex derivative on numpy
arrays.  Closed-form kinds never approximate; ``Primitive`` is the only
node whose value comes from quadrature.  Trees serialize to plain dicts
(see :func:`to_dict` / :func:`from_dict`) and reload to bit-identical
evaluators.
"""
from functools import lru_cache

import numpy as np

from ._kernels import moebius_product
from .errors import QuadratureError


def _prep(z):
    arr = np.asarray(z, dtype=np.complex128)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return complex(arr) if scalar else arr


def _enc(c):
    c = complex(c)
    return [c.real, c.imag]


def _dec(v):
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(v)


class AnalyticFunction:
    """Base node.  Subclasses implement ``_value`` and ``_deriv`` on 1-d arrays."""

    kind = None

    def __call__(self, z):
        return self.value(z)

    def value(self, z):
        arr, scalar = _prep(z)
        return _out(self._value(arr.reshape(-1)).reshape(arr.shape), scalar)

    def deriv(self, z):
        arr, scalar = _prep(z)
        return _out(self._deriv(arr.reshape(-1)).reshape(arr.shape), scalar)

    def value_and_deriv(self, z):
        arr, scalar = _prep(z)
        v, d = self._value_and_deriv(arr.reshape(-1))
        return _out(v.reshape(arr.shape), scalar), _out(d.reshape(arr.shape), scalar)

    def _value_and_deriv(self, z):
        return self._value(z), self._deriv(z)

    def params(self):
        return {}

    def children(self):
        return []

    def __repr__(self):
        return f"{type(self).__name__}({self.params()})"


class Monomial(AnalyticFunction):
    """``coeff * z**power``."""

    kind = "monomial"

    def __init__(self, power, coeff=1.0):
        if int(power) != power or power < 0:
            raise ValueError(f"monomial power must be a non-negative integer, got {power!r}")
        self.power = int(power)
        self.coeff = complex(coeff)

    def _value(self, z):
        if self.power == 0:
            return np.full(z.shape, self.coeff, dtype=np.complex128)
        return self.coeff * z ** self.power

    def _deriv(self, z):
        if self.power == 0:
            return np.zeros(z.shape, dtype=np.complex128)
        if self.power == 1:
            return np.full(z.shape, self.coeff, dtype=np.complex128)
        return (self.coeff * self.power) * z ** (self.power - 1)

    def params(self):
        return {"power": self.power, "coeff": _enc(self.coeff)}


class Moebius(AnalyticFunction):
    """Disk automorphism ``b_a(z) = (z - a) / (1 - conj(a) z)``, vanishing at ``a``."""

    kind = "moebius"

    def __init__(self, a):
        self.a = complex(a)

    def _value(self, z):
        return (z - self.a) / (1.0 - self.a.conjugate() * z)

    def _deriv(self, z):
        den = 1.0 - self.a.conjugate() * z
        return (1.0 - abs(self.a) ** 2) / (den * den)

    def params(self):
        return {"a": _enc(self.a)}


class Kernel(AnalyticFunction):
    """``g_w(z) = (1 - |w|^2) / (1 - conj(w) z)^2``; note ``g_w(w) = 1/(1 - |w|^2)``."""

    kind = "kernel"

    def __init__(self, w):
        self.w = complex(w)
        self._scale = 1.0 - (self.w.real ** 2 + self.w.imag ** 2)

    def _value(self, z):
        den = 1.0 - self.w.conjugate() * z
        return self._scale / (den * den)

    def _deriv(self, z):
        wc = self.w.conjugate()
        den = 1.0 - wc * z
        return (2.0 * wc * self._scale) / (den * den * den)

    def params(self):
        return {"w": _enc(self.w)}


class BlaschkeProduct(AnalyticFunction):
    """Finite Blaschke product with factors ``(|a|/a)(a - z)/(1 - conj(a) z)``.

    A zero at the origin contributes the factor ``z``.  With this
    normalization ``B(0) = prod |a_j|`` is real and non-negative.
    """

    kind = "blaschke"

    def __init__(self, zeros):
        self.zeros = np.array([complex(a) for a in zeros], dtype=np.complex128)
        # (|a|/a)(a - z)/(1 - conj(a) z) = -(|a|/a) * b_a(z)
        phase = 1.0 + 0.0j
        for a in self.zeros:
            if a != 0:
                phase *= -abs(a) / a
        self.phase = phase

    def _value_and_deriv(self, z):
        v, d = moebius_product(z, self.zeros)
        return self.phase * v, self.phase * d

    def _value(self, z):
        return self._value_and_deriv(z)[0]

    def _deriv(self, z):
        return self._value_and_deriv(z)[1]

    def params(self):
        return {"zeros": [_enc(a) for a in self.zeros]}


class BeurlingBasisFunction(AnalyticFunction):
    """Blaschke-Lagrange basis element ``f_k(z) = prod_{j!=k} b_{z_j}(z) / b_{z_j}(z_k)``.

    ``f_k(z_j)`` is 1 for ``j == k`` and exactly 0 otherwise.
    """

    kind = "beurling-basis"

    def __init__(self, nodes, index):
        self.nodes = np.array([complex(a) for a in nodes], dtype=np.complex128)
        self.index = int(index)
        if not 0 <= self.index < len(self.nodes):
            raise IndexError(f"basis index {index} out of range for {len(self.nodes)} nodes")
        self.denominator = complex(moebius_product(self.nodes[self.index], self.nodes, self.index)[0])

    def _value_and_deriv(self, z):
        v, d = moebius_product(z, self.nodes, self.index)
        return v / self.denominator, d / self.denominator

    def _value(self, z):
        return self._value_and_deriv(z)[0]

    def _deriv(self, z):
        return self._value_and_deriv(z)[1]

    def params(self):
        return {"nodes": [_enc(a) for a in self.nodes], "index": self.index}


class LinearCombination(AnalyticFunction):
    """``sum_i coeffs[i] * terms[i]``; the empty combination is the zero function."""

    kind = "linear-combination"

    def __init__(self, coeffs, terms):
        self.coeffs = [complex(c) for c in coeffs]
        self.terms = list(terms)
        if len(self.coeffs) != len(self.terms):
            raise ValueError("coeffs and terms differ in length")

    def _value(self, z):
        out = np.zeros(z.shape, dtype=np.complex128)
        for c, t in zip(self.coeffs, self.terms):
            out += c * t._value(z)
        return out

    def _deriv(self, z):
        out = np.zeros(z.shape, dtype=np.complex128)
        for c, t in zip(self.coeffs, self.terms):
            out += c * t._deriv(z)
        return out

    def _value_and_deriv(self, z):
        v = np.zeros(z.shape, dtype=np.complex128)
        d = np.zeros(z.shape, dtype=np.complex128)
        for c, t in zip(self.coeffs, self.terms):
            tv, td = t._value_and_deriv(z)
            v += c * tv
            d += c * td
        return v, d

    def params(self):
        return {"coeffs": [_enc(c) for c in self.coeffs]}

    def children(self):
        return self.terms


class Product(AnalyticFunction):
    """Pointwise product of factors, derivative by the product rule."""

    kind = "product"

    def __init__(self, factors):
        self.factors = list(factors)

    def _value(self, z):
        out = np.ones(z.shape, dtype=np.complex128)
        for f in self.factors:
            out *= f._value(z)
        return out

    def _value_and_deriv(self, z):
        val = np.ones(z.shape, dtype=np.complex128)
        der = np.zeros(z.shape, dtype=np.complex128)
        for f in self.factors:
            fv, fd = f._value_and_deriv(z)
            der = der * fv + val * fd
            val = val * fv
        return val, der

    def _deriv(self, z):
        return self._value_and_deriv(z)[1]

    def children(self):
        return self.factors


@lru_cache(maxsize=None)
def _gauss_legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    # mapped to [0, 1]
    return (x + 1.0) / 2.0, w / 2.0


class Primitive(AnalyticFunction):
    """Antiderivative of ``fprime`` normalized by ``f(0) = f0``.

    ``f(z) = f0 + int_0^1 fprime(t z) z dt``, evaluated by Gauss-Legendre
    on the radial segment with per-point interval bisection.  An interval
    is accepted when its two halves agree with the whole to ``rel_tol``
    times the (length-weighted) L1 size of the integrand.
    """

    kind = "primitive"

    def __init__(self, fprime, f0=0.0, order=32, rel_tol=1e-12, max_bisections=12):
        self.fprime = fprime
        self.f0 = complex(f0)
        self.order = int(order)
        self.rel_tol = float(rel_tol)
        self.max_bisections = int(max_bisections)

    def _deriv(self, z):
        return self.fprime._value(z)

    def _gl(self, zp, a, b):
        x, w = _gauss_legendre(self.order)
        h = (b - a)[:, None]
        t = a[:, None] + h * x[None, :]
        vals = self.fprime._value((t * zp[:, None]).reshape(-1)).reshape(t.shape)
        vals = vals * zp[:, None]
        return (vals * (h * w[None, :])).sum(axis=1), (np.abs(vals) * (h * w[None, :])).sum(axis=1)

    def _value(self, z):
        n = z.shape[0]
        result = np.zeros(n, dtype=np.complex128)
        if n == 0:
            return result
        pidx = np.arange(n)
        a = np.zeros(n)
        b = np.ones(n)
        whole, scale = self._gl(z, a, b)
        if not (np.all(np.isfinite(whole)) and np.all(np.isfinite(scale))):
            bad = int(np.flatnonzero(~np.isfinite(whole) | ~np.isfinite(scale))[0])
            raise QuadratureError("non-finite integrand on radial segment", location=complex(z[bad]))
        depth = 0
        worst = 0.0
        while pidx.size:
            mid = 0.5 * (a + b)
            left, _ = self._gl(z[pidx], a, mid)
            right, _ = self._gl(z[pidx], mid, b)
            fine = left + right
            diff = np.abs(fine - whole)
            ok = diff <= self.rel_tol * scale[pidx] * (b - a)
            depth += 1
            if depth >= self.max_bisections and not ok.all():
                rel = diff[~ok] / np.maximum(scale[pidx][~ok], np.finfo(float).tiny)
                worst = float(rel.max())
                raise QuadratureError(
                    f"radial quadrature did not reach rel_tol={self.rel_tol:g} after "
                    f"{self.max_bisections} bisections (achieved {worst:.3g})",
                    error_estimate=worst,
                    location=complex(z[pidx[~ok][np.argmax(rel)]]),
                )
            np.add.at(result, pidx[ok], fine[ok])
            keep = ~ok
            pidx = np.concatenate([pidx[keep], pidx[keep]])
            a, b = np.concatenate([a[keep], mid[keep]]), np.concatenate([mid[keep], b[keep]])
            whole = np.concatenate([left[keep], right[keep]])
        return self.f0 + result

    def _value_and_deriv(self, z):
        return self._value(z), self._deriv(z)

    def params(self):
        return {
            "f0": _enc(self.f0),
            "order": self.order,
            "rel_tol": self.rel_tol,
            "max_bisections": self.max_bisections,
        }

    def children(self):
        return [self.fprime]


_KINDS = {
    cls.kind: cls
    for cls in (Monomial, Moebius, Kernel, BlaschkeProduct, BeurlingBasisFunction,
                LinearCombination, Product, Primitive)
}


def zero_function():
    return LinearCombination([], [])


def to_dict(f):
    """Serialize a construction tree to JSON-compatible primitives."""
    node = {"kind": f.kind, "params": f.params()}
    kids = f.children()
    if kids:
        node["children"] = [to_dict(c) for c in kids]
    return node


def from_dict(node):
    """Rebuild a tree produced by :func:`to_dict`.  Raises ``ValueError`` on malformed input."""
    if not isinstance(node, dict) or "kind" not in node:
        raise ValueError("function node must be an object with a 'kind' field")
    kind = node["kind"]
    if kind not in _KINDS:
        raise ValueError(f"unknown function kind {kind!r}")
    p = node.get("params", {})
    kids = [from_dict(c) for c in node.get("children", [])]
    try:
        if kind == "monomial":
            return Monomial(p["power"], _dec(p.get("coeff", 1.0)))
        if kind == "moebius":
            return Moebius(_dec(p["a"]))
        if kind == "kernel":
            return Kernel(_dec(p["w"]))
        if kind == "blaschke":
            return BlaschkeProduct([_dec(a) for a in p["zeros"]])
        if kind == "beurling-basis":
            return BeurlingBasisFunction([_dec(a) for a in p["nodes"]], p["index"])
        if kind == "linear-combination":
            return LinearCombination([_dec(c) for c in p["coeffs"]], kids)
        if kind == "product":
            return Product(kids)
        if len(kids) != 1:
            raise ValueError("primitive node needs exactly one child")
        return Primitive(kids[0], _dec(p.get("f0", 0.0)), p.get("order", 32),
                         p.get("rel_tol", 1e-12), p.get("max_bisections", 12))
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed {kind!r} node: {exc}") from exc
