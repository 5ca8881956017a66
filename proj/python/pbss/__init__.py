"""Photonic blind source separation simulator."""

from pbss._pbss import *  # noqa: F401,F403
