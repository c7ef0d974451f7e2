"""
dipolar-eit Test Suite
Tests for the kernel, solvers, lattice and command line.
"""
