"""gammaperm: an executable check suite for a categorical delooping pipeline.

The package builds finite based categories, multicategories of based
categories, truncated diagram categories over finite based sets, wreath
constructions and free permutative categories, and machine checks the
coherence identities that make the whole pipeline multiplicative.
"""

__version__ = "0.1.0"
