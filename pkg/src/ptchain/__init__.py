"""Spectra of chains of oscillators with imaginary nearest-neighbour coupling."""

from . import focksolver, hamiltonian, linalg, normalmodes, perturbation, phasescan, symmetry
from .errors import ComputationError, PtchainError, UnsupportedError, ValidationError
from .hamiltonian import OscillatorChain, build_chain, quadratic_form
from .normalmodes import Reality, classify_level, mode_frequencies, spectrum_lattice

__version__ = "0.1.0"
