"""Integration tests for vm-dispatch-lab."""
