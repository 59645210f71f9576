"""Backend package"""
