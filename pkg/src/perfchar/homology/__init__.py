from .complexes import FreeComplex, complex_check, koszul_complex, tensor_total_complex
from .grade import GradeResult, cech_grade, ext_grade, koszul_grade
from .perfection import (
    ExactnessWitness,
    PdimReport,
    RootTowerTruncation,
    VanishReport,
    perfection_pdim_bound,
    root_tower_complex,
    root_tower_exactness_witness,
    vanish_check,
)
from .resolution import HomologyResult, TorResult, ext, free_resolution, tor
