"""Backend noise package"""
from backend.noise.rng_stream import (
    RNG_ALGORITHM,
    JumpBatch,
    NoiseBlock,
    RngStream,
    gaussian_increment,
    mix64,
    poisson_count,
    sample_marks,
)

__all__ = [
    'RNG_ALGORITHM',
    'JumpBatch',
    'NoiseBlock',
    'RngStream',
    'gaussian_increment',
    'mix64',
    'poisson_count',
    'sample_marks',
]
