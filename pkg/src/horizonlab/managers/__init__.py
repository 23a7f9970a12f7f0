"""Storage owned by the harness."""
from .results import ResultsManager
from .cache import CacheManager
