"""bridgekit: computing with bridge trisections of surfaces in the four-ball."""

__version__ = "0.1.0"
