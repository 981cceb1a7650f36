"""
Markov Tools Module

This module registers the exact tools: Markov numbers and their
a-generalisations, tree enumeration, Cohn word traces and commutator traces.
Every result is returned as decimal strings.
"""

import logging
from mcp.server.fastmcp import FastMCP

from ..config import RunConfig
from ..cohn import christoffel_word, commutator_trace, trace_of
from ..errors import MarkovFockError
from ..export import make_json_safe, tree_records
from ..markov import SurfaceMode, TreeCache, enumerate_tree, markov_number, trace_at
from .requests import fraction_field, int_field, surface_field

# enumerate_tree output doubles with every level
MAX_TREE_DEPTH = 12


class MarkovTools:

    def __init__(self, logger: logging.Logger, cache: TreeCache | None = None, config: RunConfig | None = None):
        self.logger = logger
        self.cache = cache if cache is not None else TreeCache()
        self.config = config or RunConfig()

    def _surface(self, request: dict):
        return surface_field(request, self.config.fricke_prec, self.config.fricke_drift)

    def register_tools(self, mcp: FastMCP) -> None:
        """Register the exact Markov tools."""

        @mcp.tool(
            name="markov_number",
            description="Markov number m(p/q) (or the a-family value X(p/q)) for p/q in [0, 1/2]",
        )
        async def get_markov_number(request: dict) -> dict:
            """Handle markov number request.

            Args:
                request: Dict containing:
                    - fraction (str): "p/q" in [0, 1/2] (required)
                    - a (int): Optional a-family parameter
                    - fricke_c (str), seed_triple (str): Optional real surface
            """
            self.logger.info("Handling markov number request")
            try:
                x = fraction_field(request)
                s = self._surface(request)
                value = markov_number(x, s, self.cache, self.config.digit_budget)
            except (MarkovFockError, ValueError) as exc:
                return self._reject(str(exc))
            self.logger.info(f"Markov number at {x} on {s.label} computed")
            return {"fraction": str(x), "surface": s.label, "value": make_json_safe(value)}

        @mcp.tool(
            name="markov_tree",
            description="Enumerate the tree of triples (X(left), X(right), X(node)) below 1/3 to a depth",
        )
        async def get_markov_tree(request: dict) -> dict:
            """Handle markov tree request.

            Args:
                request: Dict containing:
                    - depth (int): Tree depth, at most 12 (default: 3)
                    - a, fricke_c, seed_triple: Optional surface selection
            """
            self.logger.info("Handling markov tree request")
            try:
                depth = int_field(request, "depth", 3)
                if depth > MAX_TREE_DEPTH:
                    return self._reject(f"depth must be at most {MAX_TREE_DEPTH}, got {depth}")
                s = self._surface(request)
                nodes = enumerate_tree(s, depth)
            except (MarkovFockError, ValueError) as exc:
                return self._reject(str(exc))
            self.logger.info(f"Enumerated {len(nodes)} nodes")
            return {"surface": s.label, "nodes": make_json_safe(tree_records(nodes, s))}

        @mcp.tool(
            name="word_trace",
            description="Christoffel word of p/q in the Cohn generators, its trace and the tree value it matches",
        )
        async def get_word_trace(request: dict) -> dict:
            """Handle word trace request.

            Args:
                request: Dict containing:
                    - fraction (str): "p/q" in [0, 1/2] (required)
                    - a (int): Optional a-family parameter
            """
            self.logger.info("Handling word trace request")
            try:
                x = fraction_field(request)
                s = self._surface(request)
                if s.mode is SurfaceMode.FRICKE:
                    return self._reject("Word traces need the classical or a-family surface")
                word = christoffel_word(x, s)
                trace = trace_of(x, s)
                expected = trace_at(x, s, self.cache, self.config.digit_budget)
            except (MarkovFockError, ValueError) as exc:
                return self._reject(str(exc))
            return {
                "fraction": str(x),
                "surface": s.label,
                "word": str(word),
                "trace": str(trace),
                "matches_tree": trace == expected,
            }

        @mcp.tool(
            name="commutator_trace",
            description="Trace of the commutator A B A^-1 B^-1 of the Cohn generators (-2 classically, 2 - 4a^6)",
        )
        async def get_commutator_trace(request: dict) -> dict:
            """Handle commutator trace request.

            Args:
                request: Dict containing:
                    - a (int): Optional a-family parameter
            """
            self.logger.info("Handling commutator trace request")
            try:
                s = self._surface(request)
                value = commutator_trace(s)
            except (MarkovFockError, ValueError) as exc:
                return self._reject(str(exc))
            return {"surface": s.label, "trace": str(value)}

    def _reject(self, message: str) -> dict:
        self.logger.error(f"Request rejected: {message}")
        return {"error": message}
