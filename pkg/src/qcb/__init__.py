"""Quantum/classical benchmark suite for crime-severity classification.

Subpackages and modules:

* :mod:`qcb.qsim` -- dense statevector simulation of small qubit registers.
* :mod:`qcb.circuits` -- correlation analysis and circuit construction.
* :mod:`qcb.optimize` -- derivative-free parameter optimization.
* :mod:`qcb.classical` -- from-scratch classical models, PCA and scalers.
* :mod:`qcb.qmodels` -- quantum classifiers and hybrid pipelines.
* :mod:`qcb.data` -- crime-statistics ingestion, labeling and synthesis.
* :mod:`qcb.evalharness` -- cross-validation harness, metrics and reports.
"""

__version__ = "0.1.0"

__all__ = [
    "qsim",
    "circuits",
    "optimize",
    "classical",
    "qmodels",
    "data",
    "evalharness",
]
