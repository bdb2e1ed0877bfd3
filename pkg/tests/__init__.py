"""tasepkit tests."""
