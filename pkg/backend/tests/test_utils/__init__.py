"""Utility unit tests"""
