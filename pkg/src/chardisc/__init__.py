"""Characters, pushed Haar measure and star-discrepancy on compact simply connected Lie groups."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .discrepancy import DiscrepancyReport, QuadratureGrid, build_quadrature, mu_box, star_discrepancy
from .errors import CharDiscError
from .et_bound import BoundReport, constant_CG, degree_bound, rhs_bound, verify
from .pushforward import density_F, density_sup_bound, jacobian_formula, numeric_jacobian, push_point
from .root_system import SUPPORTED_GROUPS, build_tables, freudenthal_multiplicities, weyl_dimension
from .sampling import ClassSequence, read_csv, sample_haar, write_csv
from .torus_chars import character_value, character_values

__all__ = [
    "BoundReport",
    "CharDiscError",
    "ClassSequence",
    "DiscrepancyReport",
    "QuadratureGrid",
    "SUPPORTED_GROUPS",
    "__version__",
    "build_quadrature",
    "build_tables",
    "character_value",
    "character_values",
    "constant_CG",
    "degree_bound",
    "density_F",
    "density_sup_bound",
    "freudenthal_multiplicities",
    "jacobian_formula",
    "mu_box",
    "numeric_jacobian",
    "push_point",
    "read_csv",
    "rhs_bound",
    "sample_haar",
    "star_discrepancy",
    "verify",
    "weyl_dimension",
    "write_csv",
]
