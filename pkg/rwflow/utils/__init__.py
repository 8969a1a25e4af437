"""Utility modules."""
from .csv_writer import CsvTable
from .fft import Direction, fft
from .ppm import PpmImage, read_ppm, synthetic_image, write_ppm
from .rng import SeededRNG, derive_seed

__all__ = [
    'CsvTable',
    'Direction',
    'fft',
    'PpmImage',
    'read_ppm',
    'synthetic_image',
    'write_ppm',
    'SeededRNG',
    'derive_seed',
]
