"""Signed determinantal process, correlation kernel, Fredholm determinants."""
