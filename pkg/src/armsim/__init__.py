"""Simulation toolkit for a six-joint serial arm."""
