"""Command-line tests"""
