"""Interval exchange transformations as immutable values.

An exchange of ``m`` intervals is described by a length vector
``lengths = (l_1, ..., l_m)`` of positive scalars summing to 1 and a
permutation ``perm`` of ``{1..m}``: the unit interval is cut at the partial
sums of the lengths and the pieces are glued back in the order given by the
permutation, preserving orientation.  The resulting map is a piecewise
translation of ``[0, 1)`` and preserves Lebesgue measure by construction.

The interval convention is left-closed/right-open everywhere: a point lying
exactly on a cut belongs to the piece on its right, which makes ``apply``
total on ``[0, 1)``.

Composition of exchanges with rotations is the central construction: see
:func:`build_composition` for the parametrized family
``S_alpha = T_k . R_{c_k alpha} . ... . T_1 . R_{c_1 alpha}``.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .scalars import (
    FIXED,
    RATIONAL,
    FixedPoint,
    Scalar,
    backend_of,
    mod_one,
    scalar_format,
    scalar_parse,
    tolerance_of,
    to_backend,
)


class Permutation:
    """A permutation of {1..m} in one-line notation.

    ``Permutation([3, 2, 1])`` sends interval 1 to slot 3, interval 2 to
    slot 2 and interval 3 to slot 1.
    """

    __slots__ = ("_slots",)

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(v) for v in images)
        m = len(imgs)
        if m == 0 or sorted(imgs) != list(range(1, m + 1)):
            raise ValueError(f"not a permutation of 1..{m}: {list(images)!r}")
        object.__setattr__(self, "_slots", tuple(v - 1 for v in imgs))

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(range(1, m + 1))

    @property
    def size(self) -> int:
        return len(self._slots)

    @property
    def images(self) -> tuple:
        """One-line notation, 1-based."""
        return tuple(s + 1 for s in self._slots)

    @property
    def slots(self) -> tuple:
        """0-based output slot of each 0-based interval index."""
        return self._slots

    def __call__(self, i: int) -> int:
        """Image of ``i`` (1-based)."""
        return self._slots[i - 1] + 1

    def inverse(self) -> "Permutation":
        inv = [0] * len(self._slots)
        for i, s in enumerate(self._slots):
            inv[s] = i + 1
        return Permutation(inv)

    @property
    def is_identity(self) -> bool:
        return all(s == i for i, s in enumerate(self._slots))

    def __eq__(self, other):
        if isinstance(other, Permutation):
            return self._slots == other._slots
        return NotImplemented

    def __hash__(self):
        return hash(self._slots)

    def __len__(self):
        return len(self._slots)

    def __repr__(self):
        return f"Permutation({list(self.images)})"

    def __reduce__(self):
        return (Permutation, (self.images,))


def is_irreducible(perm: Permutation) -> bool:
    """True iff no proper prefix {1..k}, k < m, is mapped onto itself."""
    top = -1
    for k, s in enumerate(perm.slots[:-1]):
        top = max(top, s)
        if top == k:
            return False
    return True


class IET:
    """An interval exchange transformation with derived cut and offset data.

    ``breakpoints`` are the input cuts ``0 = b_0 < b_1 < ... < b_m = 1``;
    ``offsets[i]`` is the translation applied on ``[b_i, b_{i+1})``.  All
    scalars must share one backend.  In fixed-point mode the lengths may sum
    to 1 only within the coincidence tolerance; the last length is then
    adjusted so the sum is exactly 1.
    """

    __slots__ = ("lengths", "perm", "_breaks", "_offsets", "_backend", "_bits")

    def __init__(self, lengths: Sequence[Scalar], perm: Permutation):
        lengths = tuple(lengths)
        m = len(lengths)
        if m != perm.size:
            raise ValueError(f"{m} lengths but permutation of size {perm.size}")
        backend = backend_of(lengths[0])
        bits = lengths[0].bits if backend == FIXED else None
        for l in lengths:
            if backend_of(l) != backend or (backend == FIXED and l.bits != bits):
                raise ValueError("lengths mix scalar backends")
        if any(not l > 0 for l in lengths):
            raise ValueError("interval lengths must be positive")

        total = lengths[0]
        for l in lengths[1:]:
            total = total + l
        if backend == RATIONAL:
            if total != 1:
                raise ValueError(f"lengths sum to {total}, expected 1")
        else:
            one = FixedPoint.one(bits)
            tol = tolerance_of(lengths[0])
            if abs(total - one) > tol:
                raise ValueError("lengths sum deviates from 1 beyond tolerance")
            if total != one:
                last = lengths[-1] + (one - total)
                if not last > 0:
                    raise ValueError("length renormalization made an interval empty")
                lengths = lengths[:-1] + (last,)

        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "_backend", backend)
        object.__setattr__(self, "_bits", bits)

        # input cuts b_0..b_m and output left endpoints, both by exact sums
        breaks = [self._zero()]
        for l in lengths:
            breaks.append(breaks[-1] + l)
        out_left = [None] * m
        acc = self._zero()
        inv = perm.inverse()
        for slot in range(m):
            i = inv(slot + 1) - 1
            out_left[i] = acc
            acc = acc + lengths[i]
        offsets = tuple(out_left[i] - breaks[i] for i in range(m))
        object.__setattr__(self, "_breaks", tuple(breaks))
        object.__setattr__(self, "_offsets", offsets)

    def __setattr__(self, name, value):
        raise AttributeError("IET is immutable")

    def _zero(self) -> Scalar:
        return FixedPoint.zero(self._bits) if self._backend == FIXED else Fraction(0)

    # -- structure ---------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.lengths)

    @property
    def backend(self) -> str:
        return self._backend

    @property
    def bits(self) -> Optional[int]:
        return self._bits

    @property
    def breakpoints(self) -> tuple:
        """All cuts b_0 = 0, ..., b_m = 1."""
        return self._breaks

    @property
    def interior_breakpoints(self) -> tuple:
        return self._breaks[1:-1]

    @property
    def offsets(self) -> tuple:
        return self._offsets

    @property
    def is_identity_map(self) -> bool:
        return self.m == 1

    @property
    def tolerance(self) -> Scalar:
        return tolerance_of(self.lengths[0])

    # -- evaluation --------------------------------------------------------

    def _coerce_point(self, x) -> Scalar:
        if isinstance(x, int):
            return (FixedPoint(x << self._bits, self._bits)
                    if self._backend == FIXED else Fraction(x))
        if backend_of(x) != self._backend:
            raise ValueError(f"point backend {backend_of(x)} does not match "
                             f"IET backend {self._backend}")
        if self._backend == FIXED and x.bits != self._bits:
            raise ValueError(f"point precision {x.bits} does not match IET "
                             f"precision {self._bits}")
        return x

    def interval_index(self, x) -> int:
        """0-based index i with b_i <= x < b_{i+1}."""
        x = self._coerce_point(x)
        if not (0 <= x and x < 1):
            raise ValueError(f"point {x!r} outside [0, 1)")
        return bisect_right(self._breaks, x, 1, self.m) - 1

    def apply(self, x) -> Scalar:
        """Image of ``x``; exact translation by the offset of its interval."""
        x = self._coerce_point(x)
        return x + self._offsets[self.interval_index(x)]

    __call__ = apply

    def nearest_breakpoint_gap(self, x) -> Scalar:
        """Distance from ``x`` to the nearest interior cut (1 if there is none)."""
        x = self._coerce_point(x)
        interior = self._breaks[1:-1]
        if not interior:
            return self._breaks[-1] - self._zero()
        j = bisect_right(interior, x)
        gaps = []
        if j > 0:
            gaps.append(x - interior[j - 1])
        if j < len(interior):
            gaps.append(interior[j] - x)
        return min(gaps)

    def is_singular_point(self, x) -> bool:
        """True when ``x`` coincides with an interior cut: exactly in rational
        mode, within the coincidence tolerance in fixed-point mode."""
        if self.m == 1:
            return False
        gap = self.nearest_breakpoint_gap(x)
        if self._backend == RATIONAL:
            return gap == 0
        return gap < self.tolerance

    # -- algebra -----------------------------------------------------------

    def inverse(self) -> "IET":
        inv = self.perm.inverse()
        new_lengths = tuple(self.lengths[inv(j) - 1] for j in range(1, self.m + 1))
        return IET(new_lengths, inv)

    def to_fixed(self, bits: int) -> "IET":
        if self._backend == FIXED and self._bits == bits:
            return self
        return IET(tuple(to_backend(l, FIXED, bits) for l in self.lengths), self.perm)

    def to_rational(self) -> "IET":
        if self._backend == RATIONAL:
            return self
        return IET(tuple(to_backend(l, RATIONAL) for l in self.lengths), self.perm)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "lengths": [scalar_format(l) for l in self.lengths],
            "permutation": list(self.perm.images),
        }

    @classmethod
    def from_json_dict(cls, data: dict, backend: str = RATIONAL,
                       bits: int = 256) -> "IET":
        lengths = [scalar_parse(t, backend, bits) for t in data["lengths"]]
        return cls(lengths, Permutation(data["permutation"]))

    def __eq__(self, other):
        """Structural equality of the presentation; see :func:`iet_equal`
        for equality of the underlying maps."""
        if isinstance(other, IET):
            return self.lengths == other.lengths and self.perm == other.perm
        return NotImplemented

    def __hash__(self):
        return hash((self.lengths, self.perm))

    def __repr__(self):
        return (f"IET(lengths=({', '.join(scalar_format(l) for l in self.lengths)}), "
                f"perm={list(self.perm.images)})")

    def __reduce__(self):
        return (IET, (self.lengths, self.perm))


def make_iet(lengths: Sequence[Scalar], perm) -> IET:
    """Build an exchange from lengths and a permutation (1-based images)."""
    if not isinstance(perm, Permutation):
        perm = Permutation(perm)
    return IET(lengths, perm)


def rotation(alpha: Scalar) -> IET:
    """The rotation x -> x + alpha mod 1 as an exchange.

    Angles are reduced mod 1 first; a zero angle gives the one-interval
    identity, anything else the two-interval exchange with lengths
    ``(1 - alpha, alpha)`` and permutation (2, 1).
    """
    a = mod_one(alpha)
    if isinstance(a, FixedPoint):
        one = FixedPoint.one(a.bits)
    else:
        one = Fraction(1)
    if a == 0:
        return IET((one,), Permutation((1,)))
    return IET((one - a, a), Permutation((2, 1)))


def identity_iet(backend: str = RATIONAL, bits: int = 256) -> IET:
    one = FixedPoint.one(bits) if backend == FIXED else Fraction(1)
    return IET((one,), Permutation((1,)))


def apply(T: IET, x) -> Scalar:
    return T.apply(x)


def invert(T: IET) -> IET:
    return T.inverse()


def _check_same_backend(a: IET, b: IET) -> None:
    if a.backend != b.backend or a.bits != b.bits:
        raise ValueError(f"backend mismatch: {a.backend}/{a.bits} vs "
                         f"{b.backend}/{b.bits}")


def _iet_from_cells(cells, backend: str, tol) -> IET:
    """Assemble an IET from (left, width, out_left) cells in input order.

    Verifies that the images tile [0, 1): exactly in rational mode, within
    ``len(cells) * tol`` in fixed-point mode, where out_lefts are then
    snapped to the exact running sum so the result tiles exactly.
    """
    n = len(cells)
    order = sorted(range(n), key=lambda j: cells[j][2])
    running = cells[0][0] - cells[0][0]  # zero in the right backend
    slack = tol * n if backend == FIXED else 0
    slots = [0] * n
    for rank, j in enumerate(order):
        left, width, out_left = cells[j]
        if backend == RATIONAL:
            if out_left != running:
                raise ValueError("cell images do not tile [0, 1)")
        else:
            if abs(out_left - running) > slack:
                raise ValueError("cell images do not tile [0, 1) within tolerance")
        slots[j] = rank
        running = running + width
    if running != 1:
        raise ValueError("cell widths do not sum to 1")
    lengths = tuple(c[1] for c in cells)
    return IET(lengths, Permutation([s + 1 for s in slots]))


def compose(outer: IET, inner: IET) -> IET:
    """The exchange acting as ``x -> outer(inner(x))``.

    The cuts of the result are the cuts of ``inner`` together with the
    inner-preimages of the cuts of ``outer``; cuts closer together than the
    coincidence tolerance are identified and the sliver dropped.  The result
    agrees with the two-step map away from its cuts and has at most
    ``inner.m + outer.m - 1`` intervals.
    """
    _check_same_backend(outer, inner)
    tol = inner.tolerance
    exact = inner.backend == RATIONAL

    cuts = list(inner.interior_breakpoints)
    inner_inv = inner.inverse()
    for d in outer.interior_breakpoints:
        cuts.append(inner_inv.apply(d))
    cuts.sort()

    one = inner.breakpoints[-1]
    zero = inner.breakpoints[0]
    points = [zero]
    for c in cuts:
        near_prev = (c == points[-1]) if exact else (c - points[-1] < tol)
        near_one = (c == one) if exact else (one - c < tol)
        if not near_prev and not near_one:
            points.append(c)

    cells = []
    for j, left in enumerate(points):
        right = points[j + 1] if j + 1 < len(points) else one
        width = right - left
        out_left = outer.apply(inner.apply(left))
        cells.append((left, width, out_left))
    return _iet_from_cells(cells, inner.backend, tol)


def canonicalize(T: IET) -> IET:
    """Merge adjacent intervals translated by the same offset.

    The result has no adjacent pair with equal offsets, represents the same
    map, and is a fixed point of this function.  Zero-length intervals
    cannot occur in a constructed IET; coinciding cuts are already dropped
    during composition.
    """
    if T.m == 1:
        return T
    exact = T.backend == RATIONAL
    tol = T.tolerance
    breaks = T.breakpoints
    offsets = T.offsets
    merged = []  # (left, width, out_left)
    for i in range(T.m):
        left = breaks[i]
        width = T.lengths[i]
        out_left = left + offsets[i]
        if merged:
            p_left, p_width, p_out = merged[-1]
            same = (offsets[i] == p_out - p_left) if exact else (
                abs(offsets[i] - (p_out - p_left)) < tol)
            if same:
                merged[-1] = (p_left, p_width + width, p_out)
                continue
        merged.append((left, width, out_left))
    if len(merged) == T.m:
        return T
    return _iet_from_cells(merged, T.backend, tol)


def iet_equal(a: IET, b: IET) -> bool:
    """Equality of the underlying maps, up to presentation.

    Both are canonicalized; lengths then compare exactly in rational mode
    and within the coincidence tolerance componentwise in fixed-point mode.
    """
    _check_same_backend(a, b)
    ca = canonicalize(a)
    cb = canonicalize(b)
    if ca.m != cb.m or ca.perm != cb.perm:
        return False
    if a.backend == RATIONAL:
        return ca.lengths == cb.lengths
    tol = a.tolerance
    return all(abs(x - y) <= tol for x, y in zip(ca.lengths, cb.lengths))


@dataclass(frozen=True)
class CompositionSpec:
    """The data of the family alpha -> T_k . R_{c_k alpha} . ... . T_1 . R_{c_1 alpha}.

    Coefficients must be nonzero; they must all be positive unless
    ``allow_mixed_signs`` is set (the exploratory mode where negative
    rotation multipliers are permitted).
    """

    iets: tuple
    coefficients: tuple
    allow_mixed_signs: bool = False

    def __init__(self, iets: Iterable[IET], coefficients: Iterable[Scalar],
                 allow_mixed_signs: bool = False):
        iets = tuple(iets)
        coefficients = tuple(coefficients)
        if len(iets) == 0 or len(iets) != len(coefficients):
            raise ValueError("need k >= 1 maps and exactly k coefficients")
        for c in coefficients:
            if c == 0:
                raise ValueError("coefficients must be nonzero")
        if not allow_mixed_signs and any(c < 0 for c in coefficients):
            raise ValueError("negative coefficients require allow_mixed_signs")
        object.__setattr__(self, "iets", iets)
        object.__setattr__(self, "coefficients", coefficients)
        object.__setattr__(self, "allow_mixed_signs", allow_mixed_signs)

    @property
    def k(self) -> int:
        return len(self.iets)

    @property
    def all_positive(self) -> bool:
        return all(c > 0 for c in self.coefficients)

    @property
    def coefficient_sum(self) -> Scalar:
        total = self.coefficients[0]
        for c in self.coefficients[1:]:
            total = total + c
        return total

    @property
    def backend(self) -> str:
        backends = {T.backend for T in self.iets}
        backends |= {backend_of(c) for c in self.coefficients}
        if len(backends) > 1:
            raise ValueError("spec mixes scalar backends")
        return backends.pop()

    def to_fixed(self, bits: int) -> "CompositionSpec":
        return CompositionSpec(
            tuple(T.to_fixed(bits) for T in self.iets),
            tuple(to_backend(c, FIXED, bits) for c in self.coefficients),
            self.allow_mixed_signs,
        )

    def to_rational(self) -> "CompositionSpec":
        return CompositionSpec(
            tuple(T.to_rational() for T in self.iets),
            tuple(to_backend(c, RATIONAL) for c in self.coefficients),
            self.allow_mixed_signs,
        )

    def to_json_dict(self) -> dict:
        d = {
            "iets": [T.to_json_dict() for T in self.iets],
            "coefficients": [scalar_format(c) for c in self.coefficients],
        }
        if self.allow_mixed_signs:
            d["allow_mixed_signs"] = True
        return d

    @classmethod
    def from_json_dict(cls, data: dict, backend: str = RATIONAL,
                       bits: int = 256) -> "CompositionSpec":
        iets = tuple(IET.from_json_dict(d, backend, bits) for d in data["iets"])
        coeffs = tuple(scalar_parse(t, backend, bits) for t in data["coefficients"])
        return cls(iets, coeffs, bool(data.get("allow_mixed_signs", False)))


def build_composition(spec: CompositionSpec, alpha: Scalar) -> IET:
    """The member ``S_alpha`` of the family, as a single canonical exchange.

    Folds ``T_i . R_{c_i alpha}`` from i = 1 up to k, canonicalizing along
    the way.  If either the spec or ``alpha`` is fixed-point, everything is
    coerced to that precision first (rational data rounds once).
    """
    if isinstance(alpha, FixedPoint):
        spec = spec.to_fixed(alpha.bits)
    elif spec.backend == FIXED:
        alpha = to_backend(alpha, FIXED, spec.iets[0].bits)

    result = None
    for T, c in zip(spec.iets, spec.coefficients):
        step = compose(T, rotation(mod_one(c * alpha)))
        result = step if result is None else compose(step, result)
        result = canonicalize(result)
    return result
