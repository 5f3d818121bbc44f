"""Exact sigma-biased measures on subspace lattices and the EKR certificate.

Rational arguments accept ``int``, ``Fraction`` or strings such as ``"1/8"``
and ``"0.75"``; decimal strings are read exactly. Rational results come back
as ``Fraction``; reports come back as dictionaries.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Union

from . import _qekr
from ._qekr import (
    BudgetExceeded,
    CapExceeded,
    DomainError,
    InvariantError,
    QekrError,
    count_all,
)

__version__ = _qekr.__version__

RationalLike = Union[int, Fraction, str]

__all__ = [
    "BudgetExceeded",
    "CapExceeded",
    "DomainError",
    "InvariantError",
    "QekrError",
    "certify",
    "context",
    "count_all",
    "full_certificate",
    "g_lower_bound",
    "gaussian_binomial",
    "measure_star",
    "measure_top",
    "moments",
    "psd_threshold",
    "search",
    "subset_check",
    "subspace_pair",
    "tail",
    "to_fraction",
]


def _arg(x: RationalLike) -> str:
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError("pass rationals as int, Fraction or str; floats are not exact")
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def to_fraction(text: str) -> Fraction:
    """Decode an ``"n/d"`` string from a report."""
    return Fraction(text)


def _load(text: str) -> dict[str, Any]:
    return json.loads(text)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    value = Fraction(_qekr.gaussian_binomial(n, k, q))
    assert value.denominator == 1
    return value.numerator


def psd_threshold(n: int, q: int) -> Fraction:
    return Fraction(_qekr.psd_threshold(n, q))


def context(q: int, n: int, sigma: RationalLike) -> dict[str, Any]:
    return _load(_qekr.context(q, n, _arg(sigma)))


def measure_star(q: int, n: int, sigma: RationalLike, t: int) -> Fraction:
    return Fraction(_qekr.measure_star(q, n, _arg(sigma), t))


def measure_top(q: int, n: int, sigma: RationalLike, t: int) -> Fraction:
    return Fraction(_qekr.measure_top(q, n, _arg(sigma), t))


def moments(theta: RationalLike, n: int, q: int) -> dict[str, Any]:
    return _load(_qekr.moments(_arg(theta), n, q))


def tail(kind: str, theta: RationalLike, n: int, q: int, t: int = 1, bits: int = 512) -> dict[str, Any]:
    """``kind`` is ``"above-half"``, ``"below-middle"`` or ``"above-shifted"``."""
    return _load(_qekr.tail(kind, _arg(theta), n, q, t, bits))


def g_lower_bound(theta1: RationalLike, theta2: RationalLike, n: int, q: int, t: int = 1,
                  bits: int = 256) -> dict[str, Any]:
    return _load(_qekr.g_lower_bound(_arg(theta1), _arg(theta2), n, q, t, bits))


def search(n: int, q: int, sigma: RationalLike, t: int = 1, *, threads: int = 1,
           max_vertices: int = 400, max_optima: int = 64) -> dict[str, Any]:
    return _load(_qekr.search(n, q, _arg(sigma), t, threads, max_vertices, max_optima))


def certify(n: int, q: int, sigma: RationalLike) -> dict[str, Any]:
    return _load(_qekr.certify(n, q, _arg(sigma)))


def full_certificate(n: int, q: int, sigma: RationalLike, max_points: int = 1000) -> dict[str, Any]:
    return _load(_qekr.full_certificate(n, q, _arg(sigma), max_points))


def subspace_pair(ell: int = 3, q: int = 2) -> dict[str, Any]:
    return _load(_qekr.subspace_pair(ell, q))


def subset_check(k: int = 2, ell: int = 18, n: int = 34) -> dict[str, Any]:
    return _load(_qekr.subset_check(k, ell, n))
