"""Templates package"""
