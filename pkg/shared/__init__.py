"""Configuration, report I/O and sweep helpers."""
