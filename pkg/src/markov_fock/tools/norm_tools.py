"""
Norm Tools Module

This module registers the certified tools: Fock's function psi, the stable
norm, Mather's beta function, corner gaps at rationals and slope brackets at
irrationals. Inexact values come back as {"value", "err"} pairs.
"""

import logging
from mcp.server.fastmcp import FastMCP

from ..config import RunConfig
from ..errors import MarkovFockError
from ..export import bound_str, make_json_safe
from ..fock_norm import beta, corner_gap, irrational_slope_bracket, psi, stable_norm
from ..markov import TreeCache
from .requests import cf_field, class_field, fraction_field, int_field, surface_field

# corner and bracket depths beyond this take minutes on large tree values
MAX_DEPTH = 16


class NormTools:

    def __init__(self, logger: logging.Logger, cache: TreeCache | None = None, config: RunConfig | None = None):
        self.logger = logger
        self.cache = cache if cache is not None else TreeCache()
        self.config = config or RunConfig()

    def _surface(self, request: dict):
        return surface_field(request, self.config.fricke_prec, self.config.fricke_drift)

    def _precision(self, request: dict) -> str:
        return str(request.get("precision", self.config.precision))

    def _depth(self, request: dict, minimum: int) -> int:
        depth = int_field(request, "depth", self.config.depth, minimum=minimum)
        if depth > MAX_DEPTH:
            raise ValueError(f"depth must be at most {MAX_DEPTH}, got {depth}")
        return depth

    def _reject(self, message: str) -> dict:
        self.logger.error(f"Request rejected: {message}")
        return {"error": message}

    def register_tools(self, mcp: FastMCP) -> None:
        """Register the certified norm tools."""

        @mcp.tool(
            name="fock_psi",
            description="Fock's function psi(p/q) = (1/q) arcosh(T(p/q)/2) with a certified error bound",
        )
        async def get_fock_psi(request: dict) -> dict:
            """Handle fock psi request.

            Args:
                request: Dict containing:
                    - fraction (str): Finite rational "p/q" (required)
                    - precision (str): Target absolute error (default: 1e-30)
                    - a, fricke_c, seed_triple: Optional surface selection
            """
            self.logger.info("Handling fock psi request")
            try:
                result = psi(
                    fraction_field(request), self._surface(request), self._precision(request),
                    self.cache, self.config.digit_budget,
                )
            except (MarkovFockError, ValueError) as exc:
                return self._reject(str(exc))
            return result.to_json()

        @mcp.tool(
            name="stable_norm",
            description="Stable norm of an integer homology class (p, q) of the torus",
        )
        async def get_stable_norm(request: dict) -> dict:
            """Handle stable norm request.

            Args:
                request: Dict containing:
                    - class (str | list): "p,q" or [p, q], not both zero (required)
                    - precision (str): Target absolute error (default: 1e-30)
                    - a, fricke_c, seed_triple: Optional surface selection
            """
            self.logger.info("Handling stable norm request")
            try:
                h = class_field(request)
                s = self._surface(request)
                value = stable_norm(h, s, self._precision(request), self.cache, self.config.digit_budget)
            except (MarkovFockError, ValueError) as exc:
                return self._reject(str(exc))
            return {"class": [str(h.h1), str(h.h2)], "surface": s.label, "norm": value.to_json()}

        @mcp.tool(
            name="mather_beta",
            description="Mather's beta function of the geodesic flow at an integer class, equal to half the squared stable norm",
        )
        async def get_mather_beta(request: dict) -> dict:
            """Handle mather beta request.

            Args:
                request: Dict containing:
                    - class (str | list): "p,q" or [p, q] (required)
                    - precision (str): Target absolute error (default: 1e-30)
            """
            self.logger.info("Handling mather beta request")
            try:
                h = class_field(request)
                s = self._surface(request)
                value = beta(h, s, self._precision(request), self.cache)
            except (MarkovFockError, ValueError) as exc:
                return self._reject(str(exc))
            return {"class": [str(h.h1), str(h.h2)], "surface": s.label, "beta": value.to_json()}

        @mcp.tool(
            name="corner_gap",
            description="Certified enclosure of the jump D+psi - D-psi at a rational; a positive lower bound proves a corner",
        )
        async def get_corner_gap(request: dict) -> dict:
            """Handle corner gap request.

            Args:
                request: Dict containing:
                    - fraction (str): Finite rational "p/q" (required)
                    - depth (int): Approach depth, 1 to 16 (default: 8)
                    - precision (str): Target absolute error (default: 1e-30)
            """
            self.logger.info("Handling corner gap request")
            try:
                result = corner_gap(
                    fraction_field(request),
                    self._depth(request, minimum=1),
                    self._surface(request),
                    self._precision(request),
                    self.config.max_retries,
                    self.cache,
                    self.config.digit_budget,
                )
            except (MarkovFockError, ValueError) as exc:
                return self._reject(str(exc))
            self.logger.info(f"Corner gap at {result.x}: certified_positive={result.certified_positive}")
            return {
                "fraction": str(result.x),
                "depth": str(result.depth),
                "gap": result.gap.to_json(),
                "lower": bound_str(result.lower, "down"),
                "upper": bound_str(result.upper, "up"),
                "left_derivative": result.left.enclosure.to_json(),
                "right_derivative": result.right.enclosure.to_json(),
                "certified_positive": result.certified_positive,
            }

        @mcp.tool(
            name="irrational_bracket",
            description="Shrinking brackets on psi' at an irrational given as a periodic continued fraction",
        )
        async def get_irrational_bracket(request: dict) -> dict:
            """Handle irrational bracket request.

            Args:
                request: Dict containing:
                    - cf (str): Periodic continued fraction, e.g. "0;2,(1)" (required)
                    - depth (int): Number of convergents, 3 to 16 (default: 8)
            """
            self.logger.info("Handling irrational bracket request")
            try:
                sequence = irrational_slope_bracket(
                    cf_field(request),
                    self._depth(request, minimum=3),
                    self._surface(request),
                    self._precision(request),
                    self.cache,
                    self.config.digit_budget,
                    self.config.max_retries,
                )
            except (MarkovFockError, ValueError) as exc:
                return self._reject(str(exc))
            return {
                "cf": str(sequence.x),
                "truncated": sequence.truncated,
                "brackets": [
                    {
                        "depth": str(b.depth),
                        "lower": bound_str(b.lower.lower, "down"),
                        "upper": bound_str(b.upper.upper, "up"),
                        "width": make_json_safe(b.width),
                    }
                    for b in sequence.brackets
                ],
            }
