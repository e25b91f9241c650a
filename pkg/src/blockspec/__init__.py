"""Spectra of Hermitian block matrices with independent Wigner blocks.

Exact limiting moments come from non-crossing pairings; circulant block
structures also have closed-form limits (two-component semicircle mixtures).
"""
from .laws import Semicircle, SemicircleMixture, mixture_moment, nu_k, wigner_law
from .linalg import eigenvalues, matrix_power_trace
from .moments import CapacityError, catalan, enumerate_nc2, limiting_moment, limiting_moment_table, word_moment
from .sampler import Seed, WignerSpec, build_dependent_wigner, sample_wigner
from .structure import (
    BlockStructure,
    assemble,
    circulant_structure,
    full_wigner_structure,
    load_structure,
    toeplitz_structure,
)

__version__ = "0.1.0"
