"""End-to-end workflow tests"""
