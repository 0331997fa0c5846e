"""
Reports Package
JSON export, the classification replay and tabular summaries
"""
