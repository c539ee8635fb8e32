"""Trace-class machinery: norms, truncations and map-norm estimates."""
