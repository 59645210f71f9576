"""Backend verification package"""
from backend.verification.invariant_suite import CheckResult, InvariantSuite, format_table

__all__ = ['CheckResult', 'InvariantSuite', 'format_table']
