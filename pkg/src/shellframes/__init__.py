"""Thin-shell (Kirchhoff-Love) elasticity with moving frames and exterior calculus."""

import jax

jax.config.update("jax_enable_x64", True)

from .errors import *  # noqa: E402,F401,F403
from .surface import (  # noqa: E402
    CANONICAL_KINDS,
    FundamentalTensors,
    SurfacePatch,
    codazzi_residual,
    fundamental_tensors,
    gauss_residual,
    intrinsic_total_curvature,
    make_canonical,
    shell_scale_factors,
    tabulated_patch,
)
from .forms import (  # noqa: E402
    ConnectionMatrix,
    FrameForm,
    basis_form,
    curvature_residual,
    exterior_derivative,
    hodge_dual,
    midsurface_connection,
    shell_connection,
    torsion_residual,
    volume_form,
    wedge,
)
from .grid import AnalyticField, Grid, geometry  # noqa: E402
from .midsurface import (  # noqa: E402
    connection_coefficients,
    covariant_div_tensor,
    covariant_div_vector,
    covariant_grad_vector,
    covariant_hessian_scalar,
    flow_lie_oracle,
    frame_partial,
    lie_derivative_curvature,
    lie_derivative_metric,
)
from .kinematics import (  # noqa: E402
    DisplacementField,
    StrainState,
    bending_strain,
    isometry_generators,
    lie_strain_3d_oracle,
    membrane_strain,
    rotation_field,
    strain_at_z,
    strain_state,
)
from .constitutive import (  # noqa: E402
    Material,
    ResultantState,
    h_tensor_apply,
    plane_stress,
    resultant_constraint_residual,
    resultants,
    shear_resultant,
    thickness_quadrature_oracle,
)
from .dynamics import (  # noqa: E402
    LoadState,
    ModeResult,
    ResidualState,
    ShellState,
    StressForm3,
    classical_eom_residual,
    covariant_eom_residual,
    dispersion_analytic,
    energy,
    numeric_dispersion,
    reduced_acceleration,
    simulate,
    stable_dt,
    stress_form_divergence_oracle,
    time_step,
)
from .fieldio import FieldFile  # noqa: E402

__version__ = "0.1.0"
