"""Model unit tests"""
