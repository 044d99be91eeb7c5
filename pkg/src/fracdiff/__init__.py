"""Finite-difference solvers for time-space Caputo-Riesz fractional diffusion."""
