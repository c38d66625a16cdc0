"""ffdyn: exact dynamics of rational maps over prime fields, cross-checked
against wreath-product fixed-point statistics."""

from .primefield import (
    INFINITY,
    PrimeField,
    ProjectivePoint,
    enumerate_p1,
    fp_add,
    fp_inv,
    fp_mul,
    fp_neg,
    fp_pow,
    is_prime,
    is_square,
)
from .dynamics import (
    FunctionalGraph,
    RationalMap,
    build_graph,
    check_orbit_separation,
    critical_points,
    evaluate,
    fiber_histogram,
    image_sizes,
    is_bijection,
    max_tail_length,
    naive_image_sizes,
    periodic_count,
)
from .groups import (
    IndicatrixPolynomial,
    Permutation,
    PermutationSet,
    closed_form_indicatrix,
    compose,
    derivative_invariants,
    fpp_coset_iterated,
    generate_from,
    has_fixed_point_free_element,
    indicatrix,
    is_transitive,
    iterate_at_zero,
    make_coset,
    make_group,
    parse_permutation,
    verify_domination,
    verify_fpp_bounds,
    wreath_elements,
)
from .theory import (
    chebotarev_error,
    compare,
    exact_orbit_distinctness,
    family_threshold,
    genus_bound,
    height_constants,
    periodic_proportion_bound,
    predicted_image_interval,
    quadratic_image_density,
    ramified_prime_bound,
    random_map_image_density,
    splitting_field_degree,
    tail_bound_iterate,
)

__version__ = "0.1.0"
