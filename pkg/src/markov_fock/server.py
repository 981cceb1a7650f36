"""
Markov Fock MCP Server

This module exposes the library to MCP clients. It sets up a FastMCP server
that registers the exact Markov tools and the certified norm tools, sharing
one tree cache between them.
"""

import logging
from contextlib import asynccontextmanager
from mcp.server.fastmcp import FastMCP
from .config import load_config
from .markov import TreeCache
from .tools.markov_tools import MarkovTools
from .tools.norm_tools import NormTools


class MarkovFockMCPServer:
    """
    Markov Fock MCP Server

    This class initializes the server and registers the tools.
    """
    def __init__(self):
        """
        Initialize the Markov Fock MCP Server.

        Sets up the FastMCP server, configures logging, validates the
        configuration and registers the tools.
        """
        self.name = "markov_fock_mcp_server"

        # Configure logging
        logging.basicConfig(
            level=logging.INFO,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        self.logger = logging.getLogger(self.name)

        # Validate configuration before starting
        self.config = load_config()
        self.config.validate()

        self._cache = TreeCache()

        @asynccontextmanager
        async def lifespan(server):
            try:
                yield
            finally:
                self.logger.info(f"Tree cache: {self._cache.hits} hits, {self._cache.misses} misses")
                self._cache.clear()

        self.mcp = FastMCP("markov_fock_mcp_server", lifespan=lifespan)

        self._register_tools()

    def _register_tools(self):
        markov_tools = MarkovTools(self.logger, self._cache, self.config)
        markov_tools.register_tools(self.mcp)
        self.logger.info("Markov tools registered")

        norm_tools = NormTools(self.logger, self._cache, self.config)
        norm_tools.register_tools(self.mcp)
        self.logger.info("Norm tools registered")

    def run(self):
        self.logger.info("Starting Markov Fock MCP Server")
        self.mcp.run()
