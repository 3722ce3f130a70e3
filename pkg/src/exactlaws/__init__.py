"""Structure-function and dissipation-functional diagnostics on periodic fields.

The package verifies the exact scaling relations tying third-order
longitudinal/transverse structure functions to mollified dissipation
functionals for four conserved quantities of ideal fluids: kinetic energy,
helicity, and the total energy and cross-helicity of a magnetized fluid.
"""

__version__ = "0.1.0"

from .grid import (
    FieldFileError,
    Grid3,
    ScalarField,
    VectorField3,
    curl,
    divergence,
    inner_mean,
    make_grid,
    project_solenoidal,
    read_field,
    shift,
    volume_mean,
    write_field,
)
from .synth import SpectrumSpec, abc_flow, mhd_test_pair, random_solenoidal, taylor_green
from .geometry import (
    DirectionSet,
    IncrementPair,
    direction_set_icosa,
    direction_set_random,
    dndl,
    identity227,
    increment,
    parse_direction_spec,
    split_long_trans,
    triple_product_check,
)
from .laws import (
    COMBINE_COEFFS,
    FitResult,
    LawKind,
    RawCombos,
    StructureReport,
    combine,
    default_directions,
    dr_fourthirds,
    elsasser,
    elsasser_inverse,
    fit_power_law,
    power_law_fit,
    raw_combos,
    sweep_structure,
    yaglom_helicity,
)
from .mollifier import (
    DissipationReport,
    Mollifier,
    bump_mollifier,
    coefficient_oracle,
    d_ball,
    d_shell,
    dr_dissipation,
    dr_dissipation_profile,
    extrapolate_to_zero,
    mollifier_moments,
    phi_L,
    phi_T,
    sweep_dissipation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
