"""
iqgates: inflationary gates and Pauli-string scrambling at log depth.

Subpackages by capability:

- ``pauli``     symplectic Pauli-string algebra over prime fields
- ``clifford``  2-qudit symplectic gates, the inflationary construction,
                and the exhaustive 2-qubit no-go search
- ``gates3``    the 3-bit reversible gate universe: Walsh spectra,
                linear/inflationary/supernonlinear censuses, CNOT topologies,
                and exact set-averaged recursion coefficients
- ``circuits``  tree/brickwork wirings and classical reversible circuits,
                including the seeded three-stage cipher
- ``dynamics``  gate-averaged Markov string dynamics, mean-field recursions,
                stay-probability scans, operator-front profiles
- ``otoc``      exact small-n string-expectation/OTOC identities, SAC OTOCs,
                and the moment-recursion solvers
- ``prs``       Hadamard-plus-permutation phase states and string-expectation
                scans against pseudorandomness thresholds
- ``cli``       seeded, reproducible experiment runner
"""

from .pauli import PauliString, SymplecticForm, multiply, symplectic_product, weight
from .clifford import (
    NoGoReport,
    NoQubitInflationaryError,
    SymplecticGate,
    conjugate,
    construct_inflationary,
    enumerate_symplectic,
    is_inflationary,
    qubit_no_go_report,
)

__version__ = "0.1.0"
