"""
TSC Graphs - Core Application Package
Finite fields, colored Cayley graphs and certified symmetry searches
"""

__version__ = "1.0.0"
__author__ = "TSC Graphs Team"
__description__ = "Totally symmetric colored graph construction and verification toolkit"
