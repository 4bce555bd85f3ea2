"""
Command-line interface for nonsmooth-hopf.
"""

from nonsmooth_hopf.cli.main import main

__all__ = ["main"]
