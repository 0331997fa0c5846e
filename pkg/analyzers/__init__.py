"""
Analyzers Package
Semilinear subgroups, symmetry verification, colored isomorphism and the certified GL_r(p) searches
"""
