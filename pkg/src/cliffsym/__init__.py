"""Rotation decompositions, stereographic projection and inversive geometry,
with a numerical certificate for the inversion symmetries of projected
Clifford tori."""

__version__ = "0.1.0"
