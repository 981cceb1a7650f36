"""
Markov Fock MCP Server - Tools Package

This package contains the tool classes the MCP server registers: exact tree
and trace queries, and certified values of Fock's function and the stable norm.
"""
