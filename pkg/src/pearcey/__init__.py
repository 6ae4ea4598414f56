"""Gap probability of the hard edge Pearcey process."""
__version__ = "0.1.0"
