"""
API de saúde do runner
"""
