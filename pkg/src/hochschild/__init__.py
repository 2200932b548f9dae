"""Exact Hochschild chains and cochains of small graded algebras: the
cochain operations, the bullet pairing with chains of the cochain algebra,
periodic cyclic chains, twisted bimodules and homology of finite windows."""

from .algebra import (AlgElem, Algebra, AlgebraError, AssociativityError, Automorphism, Bimodule,
                      dump_algebra, identity_automorphism, load_algebra, twisted_action)
from .families import (BUILTIN, dilation, dual_numbers, exterior, matrix_algebra, polynomial,
                       truncated_polynomial)
from .homology import (HomologyReport, Window, WindowError, assemble_chain_complex,
                       assemble_cochain_complex, hkr_dims_oracle, homology_table)
from .linalg import ComplexSlice, SparseMatrix, complex_homology, kernel_basis, sparse_rank

__version__ = "0.1.0"
