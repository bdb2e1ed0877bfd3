"""Model parameters, F-functions, determinants and Green functions."""
