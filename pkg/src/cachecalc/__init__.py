"""Memory-load tradeoffs for decentralized coded caching with random linear placement."""

__version__ = "0.1.0"
