"""
Markov Fock Package

Exact Markov numbers and their a-generalisations, certified values of Fock's
function and the stable norm of the torus, and the MCP server exposing them.
"""

from .server import MarkovFockMCPServer


def main():
    # Main entry point for the MCP server; the CLI lives in markov_fock.cli
    server = MarkovFockMCPServer()
    server.run()

if __name__ == "__main__":
    main()
