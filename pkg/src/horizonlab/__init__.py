"""horizonlab: prediction horizons and prediction costs of quantum and classical evolution."""
__version__ = '0.3.1'
__version_info__ = ([int(num) for num in __version__.split('.')])
