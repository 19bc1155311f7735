"""Central tolerance table shared by the test-suite, ``verify`` and the CLI.

Override individual entries with ``with_overrides({"key": value})`` or the
CLI flag ``--tol key=value``.
"""

DEFAULTS = {
    # geometry
    "tangent_unit": 1e-14,
    "spectral_derivative": 1e-12,
    "min_speed": 1e-10,
    "winding_offset": 0.25,
    "node_clearance": 1e-8,
    # weights
    "min_weight": 1e-12,
    "weight_derivative": 1e-10,
    "reciprocal": 1e-12,
    # szego core
    "identity_disk": 1e-13,
    "diagonal_richardson": 1e-6,
    "refinement_residual": 1e-10,
    "condition_max": 1e3,
    "base_clearance_spacings": 5.0,
    "near_boundary": 0.1,
    "accuracy_warning": 0.02,
    "derivative_clearance": 0.05,
    "reproducing": 1e-8,
    "hermitian": 1e-8,
    "skew": 1e-10,
    # garabedian
    "holomorphy": 1e-7,
    "transpose": 1e-7,
    "pole_hit": 1e-8,
    "boundary_zero_suspect": 1e-6,
    # maps
    "ahlfors_base": 1e-9,
    "boundary_modulus": 1e-6,
    "derivative_fd": 1e-5,
    "garabedian_zero": 1e-10,
    "q_modulus": 1e-6,
    "szego_zero": 1e-10,
    "rigid_motion": 1e-9,
    # zeros
    "contour_min_modulus": 1e-8,
    "contour_offset_spacings": 3.0,
    "quadtree_margin": 0.02,
    "quadtree_depth": 12,
    # divisor
    "gram_condition": 1e10,
    "divisor_constraint": 1e-9,
    # acceptance
    "disk_closed_form": 1e-9,
    "mainexam": 1e-8,
    "poisson": 1e-6,
    "abs2_szego": 1e-6,
    "inv_abs2_garabedian": 1e-5,
    "nehari": 1e-7,
    "neh_annulus": 1e-6,
    "divisor_disk": 1e-9,
    "sc2": 1e-7,
    "metric": 1e-8,
    "product_disk": 1e-7,
    "bergman_disk": 1e-6,
    "rank_one_minor": 1e-5,
    "rank_one_fit": 1e-5,
    "convergence_ratio": 0.1,
    "ahlfors_convergence_ratio": 0.1,
    "spectral_gain": 10.0,
    "spectral_floor": 1e-11,
}


def with_overrides(overrides=None):
    tol = dict(DEFAULTS)
    for key, value in (overrides or {}).items():
        if key not in tol:
            raise KeyError(f"unknown tolerance {key!r}")
        tol[key] = float(value)
    return tol
