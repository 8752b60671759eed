"""Classification and isotopy certificates for Lagrangian product tori."""

__version__ = "0.1.0"
