"""Filling algorithms and experiments."""
