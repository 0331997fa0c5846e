"""
Graph Builders Package
Colored Cayley graph families and the fixed data of the named exceptional graphs
"""
