"""Numerical verification of conserved currents for the Dirac, Klein-Gordon,
Pauli and Schrodinger equations, with nullspace certificates of uniqueness."""

from .gamma_algebra import GammaRep, build_standard_rep
from .solution_factory import FieldJet, PhysicalConstants, WaveField, eval_jet
from .verify import SweepReport, VerificationError, conservation_sweep, divergence_at, global_charge

__version__ = "0.1.0"

__all__ = [
    "FieldJet",
    "GammaRep",
    "PhysicalConstants",
    "SweepReport",
    "VerificationError",
    "WaveField",
    "build_standard_rep",
    "conservation_sweep",
    "divergence_at",
    "eval_jet",
    "global_charge",
]
