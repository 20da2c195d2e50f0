"""Workbench for recollements of preprojective algebras over a base algebra."""

__version__ = "0.1.0"
