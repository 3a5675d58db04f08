"""Calibration-free cellular localization from relative signal strengths."""

try:
    from ._crescendo import *  # noqa: F401,F403
except ImportError:  # in-tree builds keep the extension next to the package
    from _crescendo import *  # noqa: F401,F403
