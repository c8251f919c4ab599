"""Optical response of an f-deformed condensate of Lambda atoms under EIT."""

__version__ = "0.1.0"
