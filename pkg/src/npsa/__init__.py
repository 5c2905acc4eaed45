"""Principal skewness analysis with orthogonal and nonorthogonal deflation.

The package finds directions of locally maximal skewness in multiband
pixel data by whitening, building the third-moment (coskewness) tensor,
and iterating a fixed-point map for tensor eigenpairs.  After each
direction either the orthogonal rule (project every mode onto the
complement) or the nonorthogonal rule (remove only the found rank-one
component) shrinks the working tensor; the second searches a strictly
larger space and is the default.

Most users want :class:`~npsa.estimator.PrincipalSkewnessAnalysis`, a
scikit-learn transformer, or the ``npsa`` command-line tool.
"""

from . import exceptions
from .coskewness import build_coskewness, directional_skewness
from .eigensearch import (
    EigenPair,
    SearchConfig,
    brute_force_eigenpairs,
    deflate_npsa_improved,
    deflate_npsa_reference,
    deflate_psa,
    fixed_point,
    lemma1_projectors,
    run,
)
from .estimator import PrincipalSkewnessAnalysis
from .io_ingest import Cube, ImagePlane, SkewReport, read_cube, read_pgm, write_pgm, write_report
from .linalg import kron, kron_power, proj_complement, rank, sym_eig
from .metrics import SeparationScore, correlation, evaluate_separation, isi, match_components, mse, tmse
from .tensor import (
    accumulate_outer3,
    contract_13,
    is_supersymmetric,
    n_mode_product,
    skewness,
    symmetrize,
    tensor_unvec,
    tensor_vec,
)
from .whitening import WhiteningModel, apply_whitening, fit_whitening

__version__ = "0.1.0"

__all__ = [
    "EigenPair",
    "PrincipalSkewnessAnalysis",
    "SearchConfig",
    "SeparationScore",
    "WhiteningModel",
    "Cube",
    "ImagePlane",
    "SkewReport",
    "accumulate_outer3",
    "apply_whitening",
    "brute_force_eigenpairs",
    "build_coskewness",
    "contract_13",
    "correlation",
    "deflate_npsa_improved",
    "deflate_npsa_reference",
    "deflate_psa",
    "directional_skewness",
    "evaluate_separation",
    "exceptions",
    "fit_whitening",
    "fixed_point",
    "is_supersymmetric",
    "isi",
    "kron",
    "kron_power",
    "lemma1_projectors",
    "match_components",
    "mse",
    "n_mode_product",
    "proj_complement",
    "rank",
    "read_cube",
    "read_pgm",
    "run",
    "skewness",
    "sym_eig",
    "symmetrize",
    "tensor_unvec",
    "tensor_vec",
    "tmse",
    "write_pgm",
    "write_report",
    "__version__",
]
