"""Numerical laboratory for Stefan-type free boundary reaction-diffusion fronts."""
