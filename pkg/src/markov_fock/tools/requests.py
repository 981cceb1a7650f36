"""
Request Parsing Helpers

Tool handlers receive plain dicts. These helpers turn their fields into
library types and raise DomainError with a message fit for the error payload.
"""

from ..config import parse_triple
from ..errors import DomainError
from ..farey import ContinuedFraction, Fraction
from ..fock_norm import HomologyClass
from ..markov import SurfaceParam


def require(request: dict, key: str) -> str:
    value = request.get(key)
    if value is None or value == "":
        raise DomainError(f"'{key}' is required")
    return value


def fraction_field(request: dict, key: str = "fraction") -> Fraction:
    return Fraction.parse(str(require(request, key)))


def cf_field(request: dict, key: str = "cf") -> ContinuedFraction:
    return ContinuedFraction.parse(str(require(request, key)))


def class_field(request: dict, key: str = "class") -> HomologyClass:
    value = require(request, key)
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise DomainError(f"'{key}' must have two coordinates")
        return HomologyClass(int(value[0]), int(value[1]))
    return HomologyClass.parse(str(value))


def int_field(request: dict, key: str, default: int, minimum: int = 0) -> int:
    raw = request.get(key, default)
    try:
        value = int(raw)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"'{key}' must be an integer, got {raw!r}") from exc
    if value < minimum:
        raise DomainError(f"'{key}' must be at least {minimum}, got {value}")
    return value


def surface_field(request: dict, fricke_prec: int = 256, fricke_drift: str = "1e-3") -> SurfaceParam:
    """Classical by default; "a" selects the a-family, "fricke_c" with "seed_triple" a real surface."""
    a = request.get("a")
    fricke_c = request.get("fricke_c")
    if a is not None and fricke_c is not None:
        raise DomainError("'a' and 'fricke_c' are mutually exclusive")
    if fricke_c is not None:
        seed = request.get("seed_triple")
        if seed is None:
            raise DomainError("'fricke_c' needs a 'seed_triple'")
        try:
            triple = parse_triple(seed) if isinstance(seed, str) else tuple(str(v) for v in seed)
        except ValueError as exc:
            raise DomainError(str(exc)) from exc
        if len(triple) != 3:
            raise DomainError("'seed_triple' needs three entries")
        return SurfaceParam.fricke(str(fricke_c), triple, fricke_prec, fricke_drift)
    if a is not None:
        return SurfaceParam.a_family(int_field(request, "a", 1, minimum=1))
    return SurfaceParam.classical()
