"""
Command-line entry point and the pytest suite.
"""
