"""
vm-dispatch-lab

Two small bytecode virtual machines, a stack machine and a register machine,
instrumented to count and time instruction dispatch and operand fetch, plus
the benchmark harness that compares them on a shared corpus.
"""

__version__ = "0.1.0"
__author__ = "vm-dispatch-lab contributors"
