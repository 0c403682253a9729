"""Numerical verification of sharp reverse isoperimetric inequalities on
nonpositively curved surfaces: vertex disks on cones and comparison
triangles on cones."""

__version__ = "0.1.0"
