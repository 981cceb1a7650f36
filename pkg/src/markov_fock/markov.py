"""
Markov Module

Exact Vieta-recursion engine for Markov numbers and their generalisations.

Three surface families are supported:

- classical: unscaled Markov triples on x^2 + y^2 + z^2 = 3xyz, step z -> 3xy - z;
- a-family: integer traces on X^2 + Y^2 + Z^2 - XYZ = 4 - 4a^6, step Z -> XY - Z;
- fricke: real traces (HPReal) on X^2 + Y^2 + Z^2 - XYZ = c with c < 0.

Values are indexed by reduced fractions through Stern-Brocot paths. A node
of the tree is stored as the triple (X(left), X(right), X(mediant)) of the
Farey triangle it sits in.
"""

from __future__ import annotations

import logging
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Union

import mpmath

from .errors import DigitBudgetExceeded, DomainError, PrecisionError
from .farey import (
    HALF,
    INFINITY,
    ONE,
    ZERO,
    Fraction,
    SBPath,
    in_fundamental,
    mediant,
    sb_encode,
    stern_brocot_path,
)
from .hpreal import HPReal, as_mpf

logger = logging.getLogger(__name__)

Value = Union[int, HPReal]

# log2(10)
_BITS_PER_DIGIT = 3.3219280948873626
_LONG_WALK = 1000
_SEED_SLACK = "1e-12"


class SurfaceMode(str, Enum):
    CLASSICAL = "classical"
    A_FAMILY = "a-family"
    FRICKE = "fricke"


@dataclass(frozen=True)
class SurfaceParam:
    """Which Vieta surface a triple lives on."""
    mode: SurfaceMode = SurfaceMode.CLASSICAL
    a: int = 1
    c: HPReal | None = None
    seed: tuple[HPReal, HPReal, HPReal] | None = None
    prec: int = 256
    drift: str = "1e-3"

    def __post_init__(self):
        if self.mode is SurfaceMode.A_FAMILY and self.a < 1:
            raise DomainError(f"The a-family needs a >= 1, got a={self.a}")
        if self.mode is SurfaceMode.FRICKE:
            if self.c is None:
                raise DomainError("Fricke mode needs the surface constant c")
            if not self.c.upper < 0:
                raise DomainError(f"Fricke mode needs c < 0, got {self.c}")

    @classmethod
    def classical(cls) -> SurfaceParam:
        return cls(SurfaceMode.CLASSICAL)

    @classmethod
    def a_family(cls, a: int) -> SurfaceParam:
        return cls(SurfaceMode.A_FAMILY, a=a)

    @classmethod
    def fricke(
        cls,
        c: str,
        seed: tuple[str, str, str] | None = None,
        prec: int = 256,
        drift: str = "1e-3",
    ) -> SurfaceParam:
        """Real-seed surface built from decimal strings.

        The seed is checked against c to within its own rounding plus a
        relative 1e-12 of X^2 + Y^2 + Z^2, then its third coordinate is
        re-solved from the first two so the stored seed is on the surface to
        full working precision.
        """
        with mpmath.workprec(prec):
            bare = cls(SurfaceMode.FRICKE, c=HPReal.from_string(c), prec=prec, drift=drift)
            if seed is None:
                return bare
            x, y, z = (HPReal.from_string(text) for text in seed)
            for name, entry in zip("XYZ", (x, y, z)):
                if not entry.lower > 2:
                    raise DomainError(f"Seed entry {name}={entry} must exceed 2")
            given = MarkovTriple(x, y, z, bare)
            residual = given.residual()
            slack = as_mpf(_SEED_SLACK) * (x.value ** 2 + y.value ** 2 + z.value ** 2)
            if abs(residual.value) > residual.err + slack:
                raise DomainError(
                    f"Seed triple ({', '.join(seed)}) is off the surface c={c}: residual {residual}"
                )
            if 2 * z.value < x.value * y.value:
                raise DomainError("The seed's Z must be the larger root, Z >= XY/2")
            completed = fricke_seed(x, y, bare)
            return cls(
                SurfaceMode.FRICKE,
                c=bare.c,
                seed=completed.entries(),
                prec=prec,
                drift=drift,
            )

    @property
    def vieta_factor(self) -> int:
        return 3 if self.mode is SurfaceMode.CLASSICAL else 1

    @property
    def label(self) -> str:
        if self.mode is SurfaceMode.CLASSICAL:
            return "classical"
        if self.mode is SurfaceMode.A_FAMILY:
            return f"a={self.a}"
        seed = ",".join(mpmath.nstr(entry.value, 20) for entry in self.seed or ())
        return f"fricke(c={mpmath.nstr(self.c.value, 20)};seed={seed};prec={self.prec})"

    @property
    def cache_key(self) -> tuple:
        """Exact identity of the surface; ``label`` rounds Fricke data for display."""
        if self.mode is SurfaceMode.CLASSICAL:
            return (self.mode.value,)
        if self.mode is SurfaceMode.A_FAMILY:
            return (self.mode.value, self.a)
        entries = (self.c,) + (self.seed or ())
        exact = tuple((entry.value._mpf_, entry.err._mpf_) for entry in entries)
        return (self.mode.value, exact, self.prec, self.drift)

    def __str__(self) -> str:
        return self.label


class Slot(str, Enum):
    X = "X"
    Y = "Y"
    Z = "Z"


@dataclass(frozen=True)
class MarkovTriple:
    """A point (X, Y, Z) on the Vieta surface of ``surface``."""
    X: Value
    Y: Value
    Z: Value
    surface: SurfaceParam = field(default_factory=SurfaceParam.classical)

    def entries(self) -> tuple[Value, Value, Value]:
        return self.X, self.Y, self.Z

    def residual(self) -> Value:
        """X^2 + Y^2 + Z^2 - k XYZ minus the surface constant; zero on the surface."""
        x, y, z = self.entries()
        if self.surface.mode is SurfaceMode.FRICKE:
            with mpmath.workprec(self.surface.prec):
                return x * x + y * y + z * z - x * y * z - self.surface.c
        k = self.surface.vieta_factor
        return x * x + y * y + z * z - k * x * y * z - surface_constant(self.surface)

    def on_surface(self) -> bool:
        r = self.residual()
        if isinstance(r, HPReal):
            return r.contains(0)
        return r == 0

    def to_json(self) -> list:
        return [str(v) if isinstance(v, int) else v.to_json() for v in self.entries()]


def surface_constant(s: SurfaceParam) -> Value:
    """Right-hand side of the surface equation in the triple's own scaling."""
    if s.mode is SurfaceMode.CLASSICAL:
        return 0
    if s.mode is SurfaceMode.A_FAMILY:
        return 4 - 4 * s.a ** 6
    return s.c


def trace_constant(s: SurfaceParam) -> Value:
    """The constant K of the trace-coordinate equation X^2 + Y^2 + Z^2 - XYZ = K."""
    return 0 if s.mode is SurfaceMode.CLASSICAL else surface_constant(s)


def fricke_seed(x: HPReal, y: HPReal, s: SurfaceParam) -> MarkovTriple:
    """Complete (X, Y) to a triple on X^2 + Y^2 + Z^2 - XYZ = c, taking the larger root Z."""
    if s.mode is not SurfaceMode.FRICKE:
        raise DomainError("fricke_seed needs a fricke surface")
    with mpmath.workprec(s.prec):
        xy = x * y
        disc = xy * xy - 4 * (x * x + y * y - s.c)
        if not disc.lower >= 0:
            raise DomainError(f"No real Z completes X={x}, Y={y} on c={s.c}")
        z = (xy + disc.sqrt()) / 2
    return MarkovTriple(x, y, z, s)


def _check_drift(t: MarkovTriple) -> None:
    drift = as_mpf(t.surface.drift)
    smallest = min(entry.value for entry in t.entries())
    worst = max(entry.err for entry in t.entries())
    if worst > drift * smallest:
        raise PrecisionError(
            f"Real Vieta step lost precision: error {mpmath.nstr(worst, 5)} exceeds "
            f"{t.surface.drift} of the smallest entry {mpmath.nstr(smallest, 10)}"
        )


def vieta_step(t: MarkovTriple, slot: Slot) -> MarkovTriple:
    """Replace one coordinate by the other root of the quadratic in it (an involution)."""
    s = t.surface
    if s.mode is not SurfaceMode.FRICKE:
        return _replace(t, slot, s.vieta_factor)
    with mpmath.workprec(s.prec):
        result = _replace(t, slot, 1)
    _check_drift(result)
    return result


def _replace(t: MarkovTriple, slot: Slot, k: int) -> MarkovTriple:
    x, y, z = t.entries()
    if slot is Slot.X:
        return MarkovTriple(k * y * z - x, y, z, t.surface)
    if slot is Slot.Y:
        return MarkovTriple(x, k * x * z - y, z, t.surface)
    return MarkovTriple(x, y, k * x * y - z, t.surface)


def root_triple(s: SurfaceParam) -> MarkovTriple:
    """The boundary triple (X(0/1), X(1/1), X(1/2))."""
    if s.mode is SurfaceMode.CLASSICAL:
        return MarkovTriple(1, 1, 2, s)
    if s.mode is SurfaceMode.A_FAMILY:
        side = s.a ** 2 + 2
        return MarkovTriple(side, side, 4 * s.a ** 2 + 2, s)
    if s.seed is None:
        raise DomainError("Fricke mode has no canonical root: supply a seed triple")
    return MarkovTriple(*s.seed, s)


def _reorder(t: MarkovTriple, order: str) -> MarkovTriple:
    values = dict(zip("XYZ", t.entries()))
    return MarkovTriple(*(values[name] for name in order), t.surface)


def descend(node: MarkovTriple, step: str) -> MarkovTriple:
    """Child of node (X(lo), X(hi), X(mid)) on the L (lo, mid) or R (mid, hi) side."""
    if step == "L":
        return _reorder(vieta_step(node, Slot.Y), "XZY")
    return _reorder(vieta_step(node, Slot.X), "ZYX")


class Region(str, Enum):
    """Farey intervals the tree walks start from."""
    FUNDAMENTAL = "fundamental"   # (0/1, 1/2), mediant 1/3
    UNIT = "unit"                 # (0/1, 1/1), mediant 1/2
    UPPER = "upper"               # (1/1, 1/0), mediant 2/1
    NEGATIVE = "negative"         # (-1/0, 0/1), mediant -1/1


_REGION_BOUNDS: dict[Region, tuple[tuple[int, int], tuple[int, int]]] = {
    Region.FUNDAMENTAL: ((0, 1), (1, 2)),
    Region.UNIT: ((0, 1), (1, 1)),
    Region.UPPER: ((1, 1), (1, 0)),
    Region.NEGATIVE: ((-1, 0), (0, 1)),
}


def region_start(region: Region, s: SurfaceParam) -> MarkovTriple:
    """Node triple at the mediant of ``region``."""
    root = root_triple(s)
    if region is Region.UNIT:
        return root
    if region is Region.FUNDAMENTAL:
        return vieta_step(_reorder(root, "XZY"), Slot.Z)
    at_infinity = vieta_step(root, Slot.Z)  # (X(0/1), X(1/1), X(1/0))
    if region is Region.UPPER:
        return vieta_step(_reorder(at_infinity, "YZX"), Slot.Z)
    return vieta_step(_reorder(at_infinity, "ZXY"), Slot.Z)


class TreeCache:
    """Thread-safe LRU map from (surface, region, path) to node triples.

    Results never depend on the cache; it only saves repeated walks.
    """

    def __init__(self, max_entries: int = 4096):
        self.max_entries = max_entries
        self._entries: OrderedDict[tuple[tuple, str, str], MarkovTriple] = OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key: tuple[tuple, str, str]) -> MarkovTriple | None:
        with self._lock:
            node = self._entries.get(key)
            if node is None:
                self.misses += 1
                return None
            self._entries.move_to_end(key)
            self.hits += 1
            return node

    def put(self, key: tuple[tuple, str, str], node: MarkovTriple) -> None:
        with self._lock:
            self._entries[key] = node
            self._entries.move_to_end(key)
            while len(self._entries) > self.max_entries:
                self._entries.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self.hits = self.misses = 0

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


def _check_digits(value: Value, max_digits: int | None) -> None:
    if max_digits is None or not isinstance(value, int):
        return
    if value.bit_length() > max_digits * _BITS_PER_DIGIT + 1:
        digits = int(value.bit_length() / _BITS_PER_DIGIT) + 1
        raise DigitBudgetExceeded(
            f"Tree value with about {digits} digits exceeds the budget of {max_digits}",
            digits,
        )


def walk(
    region: Region,
    path: SBPath,
    s: SurfaceParam,
    cache: TreeCache | None = None,
    max_digits: int | None = None,
) -> MarkovTriple:
    """Node triple reached by following ``path`` down from the mediant of ``region``."""
    key = (s.cache_key, region.value, path.steps)
    if cache is not None:
        node = cache.get(key)
        if node is not None:
            return node
        if path.steps:
            parent = cache.get((s.cache_key, region.value, path.steps[:-1]))
            if parent is not None:
                node = descend(parent, path.steps[-1])
                _check_digits(node.Z, max_digits)
                cache.put(key, node)
                return node
    if len(path) > _LONG_WALK:
        logger.info(f"Walking {len(path)} steps in region {region.value} on {s.label}")
    node = region_start(region, s)
    for step in path.steps:
        node = descend(node, step)
        _check_digits(node.Z, max_digits)
    if cache is not None:
        cache.put(key, node)
    return node


def value_at(
    x: Fraction,
    s: SurfaceParam,
    cache: TreeCache | None = None,
    max_digits: int | None = None,
) -> Value:
    """Tree value at any point of the projective line, in the surface's own scaling."""
    root = root_triple(s)
    if x == ZERO:
        return root.X
    if x == ONE:
        return root.Y
    if x == INFINITY:
        return vieta_step(root, Slot.Z).Z
    if x.p > 0 and x.p < x.q:
        region = Region.UNIT
    elif x.p > x.q:
        region = Region.UPPER
    else:
        region = Region.NEGATIVE
    left, right = _REGION_BOUNDS[region]
    path = stern_brocot_path(x, left, right)
    return walk(region, path, s, cache, max_digits).Z


def markov_number(
    x: Fraction,
    s: SurfaceParam,
    cache: TreeCache | None = None,
    max_digits: int | None = None,
) -> Value:
    """m(p/q) (classical, unscaled) or X(p/q) for x in [0, 1/2]."""
    if x == ZERO:
        return root_triple(s).X
    if x == HALF:
        return root_triple(s).Z
    if not in_fundamental(x):
        # same error sb_encode raises, named for this operation
        raise DomainError(f"markov_number needs x in [0, 1/2], got {x}")
    return walk(Region.FUNDAMENTAL, sb_encode(x), s, cache, max_digits).Z


def trace_at(
    x: Fraction,
    s: SurfaceParam,
    cache: TreeCache | None = None,
    max_digits: int | None = None,
) -> Value:
    """Trace-coordinate value T(x): 3 m(x) classically, X(x) otherwise."""
    value = value_at(x, s, cache, max_digits)
    return 3 * value if s.mode is SurfaceMode.CLASSICAL else value


def iter_tree(
    s: SurfaceParam, max_depth: int
) -> Iterator[tuple[Fraction, SBPath, MarkovTriple]]:
    """Breadth-first walk of the tree under 1/3, level by level, left to right."""
    if max_depth < 0:
        raise DomainError(f"depth must be non-negative, got {max_depth}")
    level = [(ZERO, HALF, SBPath(""), region_start(Region.FUNDAMENTAL, s))]
    for depth in range(max_depth + 1):
        next_level = []
        for lo, hi, path, node in level:
            mid = mediant(lo, hi)
            yield mid, path, node
            if depth < max_depth:
                next_level.append((lo, mid, SBPath(path.steps + "L"), descend(node, "L")))
                next_level.append((mid, hi, SBPath(path.steps + "R"), descend(node, "R")))
        level = next_level


def enumerate_tree(s: SurfaceParam, depth: int) -> list[tuple[Fraction, MarkovTriple]]:
    """Every node to ``depth`` with its Farey label; each triple is checked on the surface."""
    nodes = []
    for x, _path, node in iter_tree(s, depth):
        if not node.on_surface():
            raise PrecisionError(f"Node {x} left the surface: residual {node.residual()}")
        nodes.append((x, node))
    logger.info(f"Enumerated {len(nodes)} nodes to depth {depth} on {s.label}")
    return nodes


def values_up_to(s: SurfaceParam, max_q: int) -> dict[Fraction, Value]:
    """Tree values of every reduced fraction in [0, 1/2] with denominator <= max_q."""
    values: dict[Fraction, Value] = {}
    root = root_triple(s)
    values[ZERO] = root.X
    if max_q >= 2:
        values[HALF] = root.Z
    stack = [(ZERO, HALF, region_start(Region.FUNDAMENTAL, s))]
    while stack:
        lo, hi, node = stack.pop()
        mid = mediant(lo, hi)
        if mid.q > max_q:
            continue
        values[mid] = node.Z
        stack.append((lo, mid, descend(node, "L")))
        stack.append((mid, hi, descend(node, "R")))
    return values


def surface_from_config(config) -> SurfaceParam:
    """SurfaceParam selected by a RunConfig (a, or fricke_c with seed_triple)."""
    if config.fricke_c is not None:
        return SurfaceParam.fricke(
            config.fricke_c, config.seed_triple, config.fricke_prec, config.fricke_drift
        )
    if config.a is not None:
        return SurfaceParam.a_family(config.a)
    return SurfaceParam.classical()
