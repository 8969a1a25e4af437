"""Measurement models, objective, initialization and the solve loop."""
