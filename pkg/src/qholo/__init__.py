"""Strong hypercontractivity on q-Fock and mixed-spin holomorphic algebras."""

__version__ = "0.1.0"
