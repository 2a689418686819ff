"""
Tests for vm-dispatch-lab

This package contains test suites for:
- Both interpreters, their assemblers and the binary codec (unit/)
- Instrumentation, oracle, report and renderers (unit/)
- Full corpus runs and the command-line interface (integration/)
"""
