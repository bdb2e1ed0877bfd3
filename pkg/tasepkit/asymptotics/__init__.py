"""Hydrodynamics, Airy functions and the KPZ scaling limit."""
