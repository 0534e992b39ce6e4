"""Robin Laplacian spectra on balls and polygons, rearrangements and inequality checks."""

__version__ = "0.1.0"
